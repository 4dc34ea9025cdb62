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

#include <limits>
#include <string>

#include "zkfuzz/il.h"
#include "zkfuzz/rv32.h"

namespace zkfuzz::il {

Word EvalIntOp(IntOp op, Word lhs, Word rhs) {
  switch (op) {
    case IntOp::kAdd:
      return lhs + rhs;
    case IntOp::kSub:
      return lhs - rhs;
    case IntOp::kMul:
      return lhs * rhs;
    case IntOp::kDiv:
      return rv32::Divu(lhs, rhs);
    case IntOp::kRem:
      return rv32::Remu(lhs, rhs);
    case IntOp::kPow: {
      Word acc = lhs;
      for (Word i = 1; i < rhs; ++i) acc *= lhs;
      return rhs == 0 ? 1 : acc;
    }
    case IntOp::kAnd:
      return lhs & rhs;
    case IntOp::kOr:
      return lhs | rhs;
    case IntOp::kXor:
      return lhs ^ rhs;
  }
  return 0;
}

bool EvalCmp(CmpOp op, Word lhs, Word rhs) {
  switch (op) {
    case CmpOp::kEq:
      return lhs == rhs;
    case CmpOp::kNeq:
      return lhs != rhs;
    case CmpOp::kLt:
      return lhs < rhs;
    case CmpOp::kLeq:
      return lhs <= rhs;
    case CmpOp::kGt:
      return lhs > rhs;
    case CmpOp::kGeq:
      return lhs >= rhs;
  }
  return false;
}

Word EvalCustom(CustomFn fn, std::span<const Word> args) {
  const Word a = args[0];
  const Word b = args[1];
  switch (fn) {
    case CustomFn::kMulh:
      return rv32::Mulh(a, b);
    case CustomFn::kMulhsu:
      return rv32::Mulhsu(a, b);
    case CustomFn::kMulhu:
      return rv32::Mulhu(a, b);
    case CustomFn::kDivs:
      return rv32::Div(a, b);
    case CustomFn::kRems:
      return rv32::Rem(a, b);
    case CustomFn::kSll:
      return rv32::Sll(a, b);
    case CustomFn::kSrl:
      return rv32::Srl(a, b);
    case CustomFn::kSra:
      return rv32::Sra(a, b);
    case CustomFn::kSlt:
      return rv32::Slt(a, b);
    case CustomFn::kSltu:
      return rv32::Sltu(a, b);
  }
  return 0;
}

Value EvalExpr(const Expr& e, const Env& env) {
  switch (e.kind()) {
    case ExprKind::kVar:
      return Value::Int(env.find(e.name())->second);
    case ExprKind::kIntLit:
      return Value::Int(e.int_value());
    case ExprKind::kBoolLit:
      return Value::Bool(e.bool_value());
    case ExprKind::kIntBin:
      return Value::Int(EvalIntOp(e.int_op(), EvalExpr(e.child(0), env).bits,
                                  EvalExpr(e.child(1), env).bits));
    case ExprKind::kBoolBin: {
      bool l = EvalExpr(e.child(0), env).as_bool();
      bool r = EvalExpr(e.child(1), env).as_bool();
      switch (e.bool_op()) {
        case BoolOp::kLAnd:
          return Value::Bool(l && r);
        case BoolOp::kLOr:
          return Value::Bool(l || r);
        case BoolOp::kLXor:
          return Value::Bool(l != r);
      }
      break;
    }
    case ExprKind::kNot:
      return Value::Bool(!EvalExpr(e.child(0), env).as_bool());
    case ExprKind::kCmp:
      return Value::Bool(EvalCmp(e.cmp_op(), EvalExpr(e.child(0), env).bits,
                                 EvalExpr(e.child(1), env).bits));
    case ExprKind::kIte:
      return EvalExpr(e.child(0), env).as_bool() ? EvalExpr(e.child(1), env)
                                                 : EvalExpr(e.child(2), env);
    case ExprKind::kCall: {
      std::vector<Word> args;
      args.reserve(e.children().size());
      for (const Expr& a : e.children()) args.push_back(EvalExpr(a, env).bits);
      return Value::Int(EvalCustom(e.custom_fn(), args));
    }
    case ExprKind::kMeta:
    case ExprKind::kFresh:
      break;
  }
  throw TypeError("cannot evaluate " + RenderExpr(e));
}

Word EvalCircuit(const Circuit& circuit, std::span<const Word> inputs) {
  if (inputs.size() != circuit.arity()) {
    throw ArityError("circuit expects " + std::to_string(circuit.arity()) +
                     " inputs, got " + std::to_string(inputs.size()));
  }
  Env env;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    env[circuit.inputs[i].name] = inputs[i];
  }
  return EvalExpr(circuit.output_expr, env).bits;
}

}  // namespace zkfuzz::il
