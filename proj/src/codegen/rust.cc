// Copyright 2026 The zkfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <set>

#include <fmt/format.h>

#include "zkfuzz/codegen.h"

namespace zkfuzz::codegen {

using il::Expr;
using il::ExprKind;

namespace {

std::string_view AsmMnemonic(il::CustomFn fn) {
  switch (fn) {
    case il::CustomFn::kDivs: return "div";
    case il::CustomFn::kRems: return "rem";
    default: return il::Name(fn);
  }
}

std::string Macro(il::CustomFn fn) {
  const auto name = il::Name(fn);
  return fmt::format(
      "  macro_rules! {0} {{\n"
      "    ($a:expr, $b:expr) => {{{{\n"
      "      let result: u32;\n"
      "      unsafe {{\n"
      "        core::arch::asm!(\n"
      "          \"{1} {{result}}, {{a}}, {{b}}\",\n"
      "          result = out(reg) result,\n"
      "          a = in(reg) $a,\n"
      "          b = in(reg) $b,\n"
      "        );\n"
      "      }}\n"
      "      result\n"
      "    }}}}\n"
      "  }}\n",
      name, AsmMnemonic(fn));
}

void CollectCalls(const Expr& e, std::set<il::CustomFn>& out) {
  if (e.kind() == ExprKind::kCall) out.insert(e.custom_fn());
  for (const Expr& c : e.children()) CollectCalls(c, out);
}

std::string Rust(const Expr& e) {
  auto l = [&] { return Rust(e.child(0)); };
  auto r = [&] { return Rust(e.child(1)); };
  switch (e.kind()) {
    case ExprKind::kVar:
      return e.name();
    case ExprKind::kIntLit:
      return e.int_value() <= 0xFFFF ? fmt::format("{}u32", e.int_value())
                                     : fmt::format("0x{:X}u32", e.int_value());
    case ExprKind::kBoolLit:
      return e.bool_value() ? "true" : "false";
    case ExprKind::kIntBin:
      switch (e.int_op()) {
        case il::IntOp::kAdd: return fmt::format("{}.wrapping_add({})", l(), r());
        case il::IntOp::kSub: return fmt::format("{}.wrapping_sub({})", l(), r());
        case il::IntOp::kMul: return fmt::format("{}.wrapping_mul({})", l(), r());
        case il::IntOp::kPow:
          return fmt::format("{}.wrapping_pow({})", l(), e.child(1).int_value());
        case il::IntOp::kDiv:
          return fmt::format("{}.checked_div({}).unwrap_or(u32::MAX)", l(), r());
        case il::IntOp::kRem:
          return fmt::format(
              "({{ let lhs: u32 = {}; lhs.checked_rem({}).unwrap_or(lhs) }})",
              l(), r());
        case il::IntOp::kAnd: return fmt::format("({} & {})", l(), r());
        case il::IntOp::kOr: return fmt::format("({} | {})", l(), r());
        case il::IntOp::kXor: return fmt::format("({} ^ {})", l(), r());
      }
      break;
    case ExprKind::kBoolBin: {
      std::string_view op = e.bool_op() == il::BoolOp::kLAnd  ? "&&"
                            : e.bool_op() == il::BoolOp::kLOr ? "||"
                                                              : "^";
      return fmt::format("({} {} {})", l(), op, r());
    }
    case ExprKind::kNot:
      return fmt::format("(!{})", l());
    case ExprKind::kCmp:
      return fmt::format("({} {} {})", l(), il::Symbol(e.cmp_op()), r());
    case ExprKind::kIte:
      return fmt::format("(if {} {{ {} }} else {{ {} }})", l(), r(),
                         Rust(e.child(2)));
    case ExprKind::kCall:
      return fmt::format("{}!({}, {})", il::Name(e.custom_fn()), l(), r());
    case ExprKind::kMeta:
    case ExprKind::kFresh:
      break;
  }
  throw il::TypeError("cannot emit " + il::RenderExpr(e));
}

std::string Params(const std::vector<il::Input>& inputs) {
  std::string out;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (i) out += ", ";
    out += inputs[i].name + ": u32";
  }
  return out;
}

std::string Args(const std::vector<il::Input>& inputs) {
  std::string out;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (i) out += ", ";
    out += inputs[i].name;
  }
  return out;
}

}  // namespace

SourceFunction EmitFunction(const il::Circuit& circuit, std::string_view name) {
  il::ValidateCircuit(circuit);
  std::string text = fmt::format("fn {}({}) -> u32 {{\n", name,
                                 Params(circuit.inputs));
  std::set<il::CustomFn> calls;
  CollectCalls(circuit.output_expr, calls);
  for (il::CustomFn fn : calls) text += Macro(fn);
  text += "  " + Rust(circuit.output_expr) + "\n}\n";
  return {std::string(name), circuit.arity(), std::move(text)};
}

ProductProgram MakeProduct(std::vector<il::Circuit> circuits) {
  if (circuits.size() < 2) {
    throw ProductError("a product program needs at least two circuits");
  }
  ProductProgram p;
  p.inputs = circuits.front().inputs;
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    if (circuits[i].inputs != p.inputs) {
      throw ProductError(fmt::format(
          "circuit {} declares different inputs than circuit 1", i + 1));
    }
    p.names.push_back(fmt::format("c{}", i + 1));
  }
  p.circuits = std::move(circuits);
  return p;
}

Word ProductSemantics(const ProductProgram& p, std::span<const Word> inputs) {
  Word first = il::EvalCircuit(p.circuits.front(), inputs);
  for (std::size_t i = 1; i < p.circuits.size(); ++i) {
    if (il::EvalCircuit(p.circuits[i], inputs) != first) return p.oops_word;
  }
  return p.success_word;
}

std::string EmitProductSource(const ProductProgram& p,
                              const SourceOptions& options) {
  std::string out = fmt::format("const OOPS: u32 = 0x{:X};\n", p.oops_word);
  out += fmt::format("const SUCCESS: u32 = 0x{:X};\n", p.success_word);
  for (std::size_t i = 0; i < p.circuits.size(); ++i) {
    out += fmt::format("\n// circuit {} as Rust function\n", p.names[i]);
    out += EmitFunction(p.circuits[i], p.names[i]).text;
  }
  out += "\n// VM entry point\n";
  if (!options.entry_annotation.empty()) out += options.entry_annotation + "\n";
  out += fmt::format("fn main({}) -> u32 {{\n", Params(p.inputs));
  if (!options.prologue.empty()) out += "  " + options.prologue + "\n";
  const std::string args = Args(p.inputs);
  for (const std::string& name : p.names) {
    out += fmt::format("  let {0}_out = {0}({1});\n", name, args);
  }
  out += "\n  // check if violation occurred\n";
  for (std::size_t i = 0; i + 1 < p.names.size(); ++i) {
    out += fmt::format("  {}if {}_out != {}_out {{\n", i ? "} else " : "",
                       p.names[i], p.names[i + 1]);
    out += "    OOPS // unexpected result\n";
  }
  out += "  } else {\n    SUCCESS // expected result\n  }\n}\n";
  return out;
}

}  // namespace zkfuzz::codegen
