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

// The circuit intermediate language: typed expression trees over 32-bit
// words, circuits with one word-valued output, and the reference evaluator
// that every other component is checked against.
//
// Semantics follow RV32IM so that the evaluator, emitted source and the
// reference VM agree on one total function:
//   - add/sub/mul/pow wrap modulo 2^32;
//   - unsigned div by zero yields 0xFFFFFFFF, rem by zero yields the dividend;
//   - comparisons are unsigned; signed behaviour is only reachable through
//     custom calls (divs, rems, sra, slt, mulh, mulhsu).

#ifndef ZKFUZZ_IL_H_
#define ZKFUZZ_IL_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zkfuzz::il {

using Word = std::uint32_t;

enum class TypeTag : std::uint8_t { kInt, kBool };

enum class ExprKind : std::uint8_t {
  kVar,
  kIntLit,
  kBoolLit,
  kIntBin,
  kBoolBin,
  kNot,
  kCmp,
  kIte,
  kCall,
  // Pattern-only nodes. A circuit containing either never type-checks.
  kMeta,   // ?x, capture metavariable
  kFresh,  // $r, fresh random constant drawn at instantiation time
};

enum class IntOp : std::uint8_t {
  kAdd, kSub, kMul, kDiv, kRem, kPow, kAnd, kOr, kXor,
};
enum class BoolOp : std::uint8_t { kLAnd, kLOr, kLXor };
enum class CmpOp : std::uint8_t { kEq, kNeq, kLt, kLeq, kGt, kGeq };
enum class CustomFn : std::uint8_t {
  kMulh, kMulhsu, kMulhu, kDivs, kRems, kSll, kSrl, kSra, kSlt, kSltu,
};

inline constexpr CustomFn kAllCustomFns[] = {
    CustomFn::kMulh, CustomFn::kMulhsu, CustomFn::kMulhu, CustomFn::kDivs,
    CustomFn::kRems, CustomFn::kSll,    CustomFn::kSrl,   CustomFn::kSra,
    CustomFn::kSlt,  CustomFn::kSltu,
};

std::string_view Symbol(IntOp op);
std::string_view Symbol(BoolOp op);
std::string_view Symbol(CmpOp op);
std::string_view Name(CustomFn fn);
std::string_view Name(TypeTag t);
std::optional<CustomFn> CustomFnFromName(std::string_view name);

// Immutable expression tree with value semantics. Copies share structure.
class Expr {
 public:
  static Expr Var(std::string name);
  static Expr IntLit(Word value);
  static Expr BoolLit(bool value);
  static Expr IntBin(IntOp op, Expr lhs, Expr rhs);
  static Expr BoolBin(BoolOp op, Expr lhs, Expr rhs);
  static Expr Not(Expr operand);
  static Expr Cmp(CmpOp op, Expr lhs, Expr rhs);
  static Expr Ite(Expr cond, Expr then_expr, Expr else_expr);
  static Expr Call(CustomFn fn, std::vector<Expr> args);
  static Expr Meta(std::string name, std::optional<TypeTag> annotation = {});
  static Expr Fresh(std::string name, TypeTag type);

  ExprKind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  Word int_value() const { return node_->literal; }
  bool bool_value() const { return node_->literal != 0; }
  IntOp int_op() const { return static_cast<IntOp>(node_->op); }
  BoolOp bool_op() const { return static_cast<BoolOp>(node_->op); }
  CmpOp cmp_op() const { return static_cast<CmpOp>(node_->op); }
  CustomFn custom_fn() const { return static_cast<CustomFn>(node_->op); }
  // Annotation of a metavariable, or the type of a fresh constant.
  std::optional<TypeTag> annotation() const { return node_->annotation; }
  const std::vector<Expr>& children() const { return node_->children; }
  const Expr& child(std::size_t i) const { return node_->children.at(i); }

  // Same kind/op/payload with different children.
  Expr WithChildren(std::vector<Expr> children) const;

  std::size_t NodeCount() const;
  // Number of nodes on the longest root-to-leaf path.
  std::size_t Depth() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  struct Node {
    ExprKind kind;
    std::uint8_t op = 0;
    Word literal = 0;
    std::string name;
    std::optional<TypeTag> annotation;
    std::vector<Expr> children;
  };
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr Make(Node node);

  std::shared_ptr<const Node> node_;
};

enum class Visibility : std::uint8_t { kPublic, kPrivate };

struct Input {
  std::string name;
  Visibility visibility = Visibility::kPublic;
  friend bool operator==(const Input&, const Input&) = default;
};

struct Circuit {
  std::vector<Input> inputs;
  std::string output_name = "out";
  Expr output_expr = Expr::IntLit(0);

  std::size_t arity() const { return inputs.size(); }
  std::set<std::string> InputNames() const;
  friend bool operator==(const Circuit&, const Circuit&) = default;
};

class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Full check: variables must be declared, operand types must match, pow
// exponents must be the literals 2 or 3, pattern nodes are rejected.
TypeTag Typecheck(const Expr& expr, const std::set<std::string>& declared);

// Structural type of a closed, well-formed expression (variables are Int).
// Metavariables report their annotation, or nullopt if unannotated.
std::optional<TypeTag> TypeOf(const Expr& expr);

// Validates names and output type. Throws TypeError.
void ValidateCircuit(const Circuit& circuit);

struct Value {
  TypeTag type = TypeTag::kInt;
  Word bits = 0;

  static Value Int(Word w) { return {TypeTag::kInt, w}; }
  static Value Bool(bool b) { return {TypeTag::kBool, b ? 1u : 0u}; }
  bool as_bool() const { return bits != 0; }
  friend bool operator==(const Value&, const Value&) = default;
};

using Env = std::map<std::string, Word, std::less<>>;

// Precondition: expr type-checks against env's names.
Value EvalExpr(const Expr& expr, const Env& env);
Word EvalIntOp(IntOp op, Word lhs, Word rhs);
Word EvalCustom(CustomFn fn, std::span<const Word> args);
bool EvalCmp(CmpOp op, Word lhs, Word rhs);

Word EvalCircuit(const Circuit& circuit, std::span<const Word> inputs);

// Text form:
//   inputs : a, b, c#priv
//   outputs: out
//   out = (a % (b + c))
std::string RenderExpr(const Expr& expr);
std::string RenderCircuit(const Circuit& circuit);

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts infix expressions with C-like precedence, so both the fully
// parenthesized canonical form and rule-table patterns parse. Pattern nodes
// (?x, ?x:int, $r:bool) are accepted; Typecheck rejects them in circuits.
Expr ParseExpr(std::string_view text);
Circuit ParseCircuit(std::string_view text);

}  // namespace zkfuzz::il

#endif  // ZKFUZZ_IL_H_
