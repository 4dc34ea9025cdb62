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

#include <algorithm>
#include <array>
#include <utility>

#include "zkfuzz/il.h"

namespace zkfuzz::il {

namespace {

constexpr std::array<std::string_view, 9> kIntSymbols = {
    "+", "-", "*", "/", "%", "**", "&", "|", "^"};
constexpr std::array<std::string_view, 3> kBoolSymbols = {"&&", "||", "^^"};
constexpr std::array<std::string_view, 6> kCmpSymbols = {"==", "!=", "<",
                                                         "<=", ">",  ">="};
constexpr std::array<std::string_view, 10> kCustomNames = {
    "mulh", "mulhsu", "mulhu", "divs", "rems",
    "sll",  "srl",    "sra",   "slt",  "sltu"};

}  // namespace

std::string_view Symbol(IntOp op) { return kIntSymbols[static_cast<int>(op)]; }
std::string_view Symbol(BoolOp op) {
  return kBoolSymbols[static_cast<int>(op)];
}
std::string_view Symbol(CmpOp op) { return kCmpSymbols[static_cast<int>(op)]; }
std::string_view Name(CustomFn fn) {
  return kCustomNames[static_cast<int>(fn)];
}
std::string_view Name(TypeTag t) {
  return t == TypeTag::kInt ? "int" : "bool";
}

std::optional<CustomFn> CustomFnFromName(std::string_view name) {
  for (std::size_t i = 0; i < kCustomNames.size(); ++i) {
    if (kCustomNames[i] == name) return static_cast<CustomFn>(i);
  }
  return std::nullopt;
}

Expr Expr::Make(Node node) {
  return Expr(std::make_shared<const Node>(std::move(node)));
}

Expr Expr::Var(std::string name) {
  return Make({.kind = ExprKind::kVar, .name = std::move(name)});
}
Expr Expr::IntLit(Word value) {
  return Make({.kind = ExprKind::kIntLit, .literal = value});
}
Expr Expr::BoolLit(bool value) {
  return Make({.kind = ExprKind::kBoolLit, .literal = value ? 1u : 0u});
}
Expr Expr::IntBin(IntOp op, Expr lhs, Expr rhs) {
  return Make({.kind = ExprKind::kIntBin,
               .op = static_cast<std::uint8_t>(op),
               .children = {std::move(lhs), std::move(rhs)}});
}
Expr Expr::BoolBin(BoolOp op, Expr lhs, Expr rhs) {
  return Make({.kind = ExprKind::kBoolBin,
               .op = static_cast<std::uint8_t>(op),
               .children = {std::move(lhs), std::move(rhs)}});
}
Expr Expr::Not(Expr operand) {
  return Make({.kind = ExprKind::kNot, .children = {std::move(operand)}});
}
Expr Expr::Cmp(CmpOp op, Expr lhs, Expr rhs) {
  return Make({.kind = ExprKind::kCmp,
               .op = static_cast<std::uint8_t>(op),
               .children = {std::move(lhs), std::move(rhs)}});
}
Expr Expr::Ite(Expr cond, Expr then_expr, Expr else_expr) {
  return Make({.kind = ExprKind::kIte,
               .children = {std::move(cond), std::move(then_expr),
                            std::move(else_expr)}});
}
Expr Expr::Call(CustomFn fn, std::vector<Expr> args) {
  return Make({.kind = ExprKind::kCall,
               .op = static_cast<std::uint8_t>(fn),
               .children = std::move(args)});
}
Expr Expr::Meta(std::string name, std::optional<TypeTag> annotation) {
  return Make({.kind = ExprKind::kMeta,
               .name = std::move(name),
               .annotation = annotation});
}
Expr Expr::Fresh(std::string name, TypeTag type) {
  return Make(
      {.kind = ExprKind::kFresh, .name = std::move(name), .annotation = type});
}

Expr Expr::WithChildren(std::vector<Expr> children) const {
  Node copy = *node_;
  copy.children = std::move(children);
  return Make(std::move(copy));
}

std::size_t Expr::NodeCount() const {
  std::size_t n = 1;
  for (const Expr& c : children()) n += c.NodeCount();
  return n;
}

std::size_t Expr::Depth() const {
  std::size_t d = 0;
  for (const Expr& c : children()) d = std::max(d, c.Depth());
  return d + 1;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.op == y.op && x.literal == y.literal &&
         x.name == y.name && x.annotation == y.annotation &&
         x.children == y.children;
}

std::set<std::string> Circuit::InputNames() const {
  std::set<std::string> names;
  for (const Input& in : inputs) names.insert(in.name);
  return names;
}

std::optional<TypeTag> TypeOf(const Expr& expr) {
  switch (expr.kind()) {
    case ExprKind::kVar:
    case ExprKind::kIntLit:
    case ExprKind::kIntBin:
    case ExprKind::kIte:
    case ExprKind::kCall:
      return TypeTag::kInt;
    case ExprKind::kBoolLit:
    case ExprKind::kBoolBin:
    case ExprKind::kNot:
    case ExprKind::kCmp:
      return TypeTag::kBool;
    case ExprKind::kMeta:
    case ExprKind::kFresh:
      return expr.annotation();
  }
  return std::nullopt;
}

namespace {

std::size_t CustomArity(CustomFn) { return 2; }

TypeTag Check(const Expr& e, const std::set<std::string>& declared) {
  auto expect = [&](const Expr& sub, TypeTag want) {
    TypeTag got = Check(sub, declared);
    if (got != want) {
      throw TypeError("operand " + RenderExpr(sub) + " has type " +
                      std::string(Name(got)) + ", expected " +
                      std::string(Name(want)) + " in " + RenderExpr(e));
    }
  };
  switch (e.kind()) {
    case ExprKind::kVar:
      if (!declared.contains(e.name())) {
        throw TypeError("undeclared variable '" + e.name() + "'");
      }
      return TypeTag::kInt;
    case ExprKind::kIntLit:
      return TypeTag::kInt;
    case ExprKind::kBoolLit:
      return TypeTag::kBool;
    case ExprKind::kIntBin:
      expect(e.child(0), TypeTag::kInt);
      if (e.int_op() == IntOp::kPow) {
        const Expr& exp = e.child(1);
        if (exp.kind() != ExprKind::kIntLit ||
            (exp.int_value() != 2 && exp.int_value() != 3)) {
          throw TypeError("pow exponent must be the literal 2 or 3 in " +
                          RenderExpr(e));
        }
      } else {
        expect(e.child(1), TypeTag::kInt);
      }
      return TypeTag::kInt;
    case ExprKind::kBoolBin:
      expect(e.child(0), TypeTag::kBool);
      expect(e.child(1), TypeTag::kBool);
      return TypeTag::kBool;
    case ExprKind::kNot:
      expect(e.child(0), TypeTag::kBool);
      return TypeTag::kBool;
    case ExprKind::kCmp:
      expect(e.child(0), TypeTag::kInt);
      expect(e.child(1), TypeTag::kInt);
      return TypeTag::kBool;
    case ExprKind::kIte:
      expect(e.child(0), TypeTag::kBool);
      expect(e.child(1), TypeTag::kInt);
      expect(e.child(2), TypeTag::kInt);
      return TypeTag::kInt;
    case ExprKind::kCall:
      if (e.children().size() != CustomArity(e.custom_fn())) {
        throw TypeError("wrong arity in " + RenderExpr(e));
      }
      for (const Expr& arg : e.children()) expect(arg, TypeTag::kInt);
      return TypeTag::kInt;
    case ExprKind::kMeta:
    case ExprKind::kFresh:
      throw TypeError("pattern variable " + RenderExpr(e) +
                      " is not allowed in a circuit");
  }
  throw TypeError("unknown expression kind");
}

bool IsReservedName(std::string_view name) {
  return name == "T" || name == "F" || name == "ite" ||
         CustomFnFromName(name).has_value();
}

}  // namespace

TypeTag Typecheck(const Expr& expr, const std::set<std::string>& declared) {
  return Check(expr, declared);
}

void ValidateCircuit(const Circuit& circuit) {
  std::set<std::string> seen;
  for (const Input& in : circuit.inputs) {
    if (in.name.empty() || IsReservedName(in.name)) {
      throw TypeError("invalid input name '" + in.name + "'");
    }
    if (!seen.insert(in.name).second) {
      throw TypeError("duplicate input '" + in.name + "'");
    }
  }
  if (circuit.output_name.empty() || seen.contains(circuit.output_name)) {
    throw TypeError("invalid output name '" + circuit.output_name + "'");
  }
  if (Typecheck(circuit.output_expr, seen) != TypeTag::kInt) {
    throw TypeError("output expression must be int: " +
                    RenderExpr(circuit.output_expr));
  }
}

}  // namespace zkfuzz::il
