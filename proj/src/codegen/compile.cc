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
#include <map>

#include <fmt/format.h>

#include "zkfuzz/codegen.h"

namespace zkfuzz::codegen {

using il::Expr;
using il::ExprKind;
using vm::Instruction;
using vm::Opcode;

namespace {

constexpr std::uint8_t kZero = 0, kRa = 1, kSp = 2, kA0 = 10, kA1 = 11,
                       kA2 = 12;
// Virtual stack levels 0..7 live in t0-t6 and s1; deeper levels spill.
constexpr std::uint8_t kPool[] = {5, 6, 7, 28, 29, 30, 31, 9};
constexpr int kPoolSize = 8;
constexpr Word kStackTop = 0x10000;

class Assembler {
 public:
  void Emit(Opcode op, std::uint8_t rd, std::uint8_t rs1, std::uint8_t rs2,
            std::int32_t imm) {
    Instruction in{op, rd, rs1, rs2, imm};
    vm::Format f = vm::FormatOf(op);
    if (!vm::HasRd(f)) in.rd = 0;
    if (!vm::HasRs1(f)) in.rs1 = 0;
    if (!vm::HasRs2(f)) in.rs2 = 0;
    code_.push_back(in);
  }
  void R(Opcode op, std::uint8_t rd, std::uint8_t a, std::uint8_t b) {
    Emit(op, rd, a, b, 0);
  }
  void I(Opcode op, std::uint8_t rd, std::uint8_t rs1, std::int32_t imm) {
    Emit(op, rd, rs1, 0, imm);
  }
  void Store(Opcode op, std::uint8_t src, std::uint8_t base, std::int32_t imm) {
    Emit(op, 0, base, src, imm);
  }
  void Branch(Opcode op, std::uint8_t a, std::uint8_t b, std::string label) {
    fixups_.emplace_back(code_.size(), std::move(label));
    Emit(op, 0, a, b, 0);
  }
  void Jal(std::uint8_t rd, std::string label) {
    fixups_.emplace_back(code_.size(), std::move(label));
    Emit(Opcode::kJal, rd, 0, 0, 0);
  }
  void LoadImm(std::uint8_t rd, Word v) {
    auto s = static_cast<std::int32_t>(v);
    if (s >= -2048 && s <= 2047) {
      I(Opcode::kAddi, rd, kZero, s);
      return;
    }
    Word upper = ((v + 0x800) >> 12) & 0xFFFFF;
    auto lower = static_cast<std::int32_t>(v - (upper << 12));
    Emit(Opcode::kLui, rd, 0, 0, static_cast<std::int32_t>(upper));
    if (lower != 0) I(Opcode::kAddi, rd, rd, lower);
  }
  void Bind(const std::string& label, bool listed = true) {
    labels_[label] = code_.size();
    if (listed) listing_.emplace_back(code_.size(), label);
  }
  std::string Fresh(std::string_view prefix) {
    return fmt::format("{}.{}", prefix, counter_++);
  }

  vm::RefProgram Finish() {
    for (auto& [index, label] : fixups_) {
      auto it = labels_.find(label);
      if (it == labels_.end()) {
        throw std::logic_error("unbound label " + label);
      }
      code_[index].imm = static_cast<std::int32_t>(
          4 * (static_cast<std::int64_t>(it->second) -
               static_cast<std::int64_t>(index)));
    }
    vm::RefProgram p;
    p.code = std::move(code_);
    p.labels = std::move(listing_);
    return p;
  }

 private:
  std::vector<Instruction> code_;
  std::vector<std::pair<std::size_t, std::string>> fixups_;
  std::map<std::string, std::size_t> labels_;
  std::vector<std::pair<std::size_t, std::string>> listing_;
  int counter_ = 0;
};

// Virtual stack levels an expression needs when evaluated at some level d:
// it uses d .. d + Need(e) - 1.
int Need(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::kIntBin:
      if (e.int_op() == il::IntOp::kPow) {
        return std::max(Need(e.child(0)), e.child(1).int_value() == 3 ? 2 : 1);
      }
      [[fallthrough]];
    case ExprKind::kBoolBin:
    case ExprKind::kCmp:
    case ExprKind::kCall:
      return std::max(Need(e.child(0)), 1 + Need(e.child(1)));
    case ExprKind::kNot:
      return Need(e.child(0));
    case ExprKind::kIte:
      return std::max({Need(e.child(0)), Need(e.child(1)), Need(e.child(2))});
    default:
      return 1;
  }
}

Opcode IntOpcode(il::IntOp op) {
  switch (op) {
    case il::IntOp::kAdd: return Opcode::kAdd;
    case il::IntOp::kSub: return Opcode::kSub;
    case il::IntOp::kMul: return Opcode::kMul;
    case il::IntOp::kDiv: return Opcode::kDivu;
    case il::IntOp::kRem: return Opcode::kRemu;
    case il::IntOp::kAnd: return Opcode::kAnd;
    case il::IntOp::kOr: return Opcode::kOr;
    case il::IntOp::kXor: return Opcode::kXor;
    case il::IntOp::kPow: break;
  }
  throw std::logic_error("pow has no single opcode");
}

Opcode CustomOpcode(il::CustomFn fn) {
  switch (fn) {
    case il::CustomFn::kMulh: return Opcode::kMulh;
    case il::CustomFn::kMulhsu: return Opcode::kMulhsu;
    case il::CustomFn::kMulhu: return Opcode::kMulhu;
    case il::CustomFn::kDivs: return Opcode::kDiv;
    case il::CustomFn::kRems: return Opcode::kRem;
    case il::CustomFn::kSll: return Opcode::kSll;
    case il::CustomFn::kSrl: return Opcode::kSrl;
    case il::CustomFn::kSra: return Opcode::kSra;
    case il::CustomFn::kSlt: return Opcode::kSlt;
    case il::CustomFn::kSltu: return Opcode::kSltu;
  }
  return Opcode::kAdd;
}

class FunctionCompiler {
 public:
  FunctionCompiler(Assembler& as, const il::Circuit& c, std::string name,
                   Word input_base)
      : as_(as), circuit_(c), name_(std::move(name)), input_base_(input_base) {
    for (std::size_t i = 0; i < c.inputs.size(); ++i) {
      slot_of_[c.inputs[i].name] = static_cast<std::int32_t>(4 * i);
    }
    spills_ = std::max(0, Need(c.output_expr) - kPoolSize);
    frame_ = static_cast<std::int32_t>(4 * (c.inputs.size() + spills_));
  }

  void Compile() {
    as_.Bind(name_);
    if (frame_) as_.I(Opcode::kAddi, kSp, kSp, -frame_);
    for (std::size_t i = 0; i < circuit_.inputs.size(); ++i) {
      auto off = static_cast<std::int32_t>(4 * i);
      as_.I(Opcode::kLw, kPool[0], kZero,
            static_cast<std::int32_t>(input_base_) + off);
      as_.Store(Opcode::kSw, kPool[0], kSp, off);
    }
    Eval(circuit_.output_expr, 0);
    as_.I(Opcode::kAddi, kA0, kPool[0], 0);
    if (frame_) as_.I(Opcode::kAddi, kSp, kSp, frame_);
    as_.I(Opcode::kJalr, kZero, kRa, 0);
  }

 private:
  std::int32_t SpillSlot(int level) const {
    return static_cast<std::int32_t>(
        4 * (circuit_.inputs.size() + (level - kPoolSize)));
  }
  std::uint8_t Src(int level, std::uint8_t scratch) {
    if (level < kPoolSize) return kPool[level];
    as_.I(Opcode::kLw, scratch, kSp, SpillSlot(level));
    return scratch;
  }
  std::uint8_t Dst(int level, std::uint8_t scratch) const {
    return level < kPoolSize ? kPool[level] : scratch;
  }
  void Commit(int level, std::uint8_t reg) {
    if (level >= kPoolSize) as_.Store(Opcode::kSw, reg, kSp, SpillSlot(level));
  }

  // Computes `op` over levels d and d+1 into level d.
  void Binary(Opcode op, int d, bool swap = false) {
    std::uint8_t a = Src(d, kA1);
    std::uint8_t b = Src(d + 1, kA2);
    std::uint8_t rd = Dst(d, kA1);
    if (swap) std::swap(a, b);
    as_.R(op, rd, a, b);
    Commit(d, rd);
  }

  void Eval(const Expr& e, int d) {
    switch (e.kind()) {
      case ExprKind::kVar: {
        std::uint8_t rd = Dst(d, kA1);
        as_.I(Opcode::kLw, rd, kSp, slot_of_.at(e.name()));
        Commit(d, rd);
        return;
      }
      case ExprKind::kIntLit:
      case ExprKind::kBoolLit: {
        std::uint8_t rd = Dst(d, kA1);
        as_.LoadImm(rd, e.kind() == ExprKind::kIntLit ? e.int_value()
                                                      : Word{e.bool_value()});
        Commit(d, rd);
        return;
      }
      case ExprKind::kIntBin:
        Eval(e.child(0), d);
        if (e.int_op() == il::IntOp::kPow) {
          Pow(d, e.child(1).int_value());
          return;
        }
        Eval(e.child(1), d + 1);
        Binary(IntOpcode(e.int_op()), d);
        return;
      case ExprKind::kBoolBin:
        Eval(e.child(0), d);
        Eval(e.child(1), d + 1);
        Binary(e.bool_op() == il::BoolOp::kLAnd  ? Opcode::kAnd
               : e.bool_op() == il::BoolOp::kLOr ? Opcode::kOr
                                                 : Opcode::kXor,
               d);
        return;
      case ExprKind::kNot: {
        Eval(e.child(0), d);
        std::uint8_t a = Src(d, kA1);
        std::uint8_t rd = Dst(d, kA1);
        as_.I(Opcode::kXori, rd, a, 1);
        Commit(d, rd);
        return;
      }
      case ExprKind::kCmp:
        Eval(e.child(0), d);
        Eval(e.child(1), d + 1);
        Compare(e.cmp_op(), d);
        return;
      case ExprKind::kIte: {
        const std::string else_label = as_.Fresh(name_ + ".else");
        const std::string end_label = as_.Fresh(name_ + ".endif");
        Eval(e.child(0), d);
        as_.Branch(Opcode::kBeq, Src(d, kA1), kZero, else_label);
        Eval(e.child(1), d);
        as_.Jal(kZero, end_label);
        as_.Bind(else_label, false);
        Eval(e.child(2), d);
        as_.Bind(end_label, false);
        return;
      }
      case ExprKind::kCall:
        Eval(e.child(0), d);
        Eval(e.child(1), d + 1);
        Binary(CustomOpcode(e.custom_fn()), d);
        return;
      case ExprKind::kMeta:
      case ExprKind::kFresh:
        break;
    }
    throw il::TypeError("cannot compile " + il::RenderExpr(e));
  }

  void Pow(int d, Word exponent) {
    std::uint8_t a = Src(d, kA1);
    if (exponent == 2) {
      std::uint8_t rd = Dst(d, kA1);
      as_.R(Opcode::kMul, rd, a, a);
      Commit(d, rd);
      return;
    }
    std::uint8_t sq = Dst(d + 1, kA2);
    as_.R(Opcode::kMul, sq, a, a);
    Commit(d + 1, sq);
    Binary(Opcode::kMul, d);
  }

  void Compare(il::CmpOp op, int d) {
    switch (op) {
      case il::CmpOp::kEq:
      case il::CmpOp::kNeq: {
        Binary(Opcode::kXor, d);
        std::uint8_t a = Src(d, kA1);
        std::uint8_t rd = Dst(d, kA1);
        if (op == il::CmpOp::kEq) {
          as_.I(Opcode::kSltiu, rd, a, 1);
        } else {
          as_.R(Opcode::kSltu, rd, kZero, a);
        }
        Commit(d, rd);
        return;
      }
      case il::CmpOp::kLt:
        Binary(Opcode::kSltu, d);
        return;
      case il::CmpOp::kGt:
        Binary(Opcode::kSltu, d, true);
        return;
      case il::CmpOp::kLeq:
      case il::CmpOp::kGeq: {
        // a <= b is !(b < a); a >= b is !(a < b).
        Binary(Opcode::kSltu, d, op == il::CmpOp::kLeq);
        std::uint8_t a = Src(d, kA1);
        std::uint8_t rd = Dst(d, kA1);
        as_.I(Opcode::kXori, rd, a, 1);
        Commit(d, rd);
        return;
      }
    }
  }

  Assembler& as_;
  const il::Circuit& circuit_;
  std::string name_;
  Word input_base_;
  std::map<std::string, std::int32_t> slot_of_;
  int spills_ = 0;
  std::int32_t frame_ = 0;
};

}  // namespace

vm::RefProgram CompileToRefVm(const ProductProgram& product) {
  Assembler as;
  const std::size_t k = product.circuits.size();
  const auto results = static_cast<std::int32_t>(4 * k);
  as.Bind("main");
  as.Emit(Opcode::kLui, kSp, 0, 0, static_cast<std::int32_t>(kStackTop >> 12));
  as.I(Opcode::kAddi, kSp, kSp, -results);
  for (std::size_t i = 0; i < k; ++i) {
    as.Jal(kRa, product.names[i]);
    as.Store(Opcode::kSw, kA0, kSp, static_cast<std::int32_t>(4 * i));
  }
  for (std::size_t i = 0; i + 1 < k; ++i) {
    as.I(Opcode::kLw, kPool[0], kSp, static_cast<std::int32_t>(4 * i));
    as.I(Opcode::kLw, kPool[1], kSp, static_cast<std::int32_t>(4 * (i + 1)));
    as.Branch(Opcode::kBne, kPool[0], kPool[1], "oops");
  }
  as.LoadImm(kA0, product.success_word);
  as.Jal(kZero, "end");
  as.Bind("oops");
  as.LoadImm(kA0, product.oops_word);
  as.Jal(kZero, "end");
  for (std::size_t i = 0; i < k; ++i) {
    FunctionCompiler(as, product.circuits[i], product.names[i],
                     vm::kDefaultInputBase)
        .Compile();
  }
  as.Bind("end");
  as.Emit(Opcode::kHalt, 0, 0, 0, 0);
  vm::RefProgram p = as.Finish();
  p.input_base = vm::kDefaultInputBase;
  p.input_count = product.arity();
  if (auto err = vm::ValidateProgram(p)) {
    throw std::runtime_error("compiled program is invalid: " + *err);
  }
  return p;
}

}  // namespace zkfuzz::codegen
