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

#include "zkfuzz/circuit_gen.h"

#include <array>
#include <iterator>

namespace zkfuzz::gen {

using il::Expr;
using il::TypeTag;

namespace {

constexpr std::array<std::string_view, 8> kVariantNames = {
    "var", "int_lit", "int_binop", "ite", "bool_lit", "bool_binop", "not",
    "compare"};

constexpr il::IntOp kIntOps[] = {
    il::IntOp::kAdd, il::IntOp::kSub, il::IntOp::kMul,
    il::IntOp::kDiv, il::IntOp::kRem, il::IntOp::kPow,
    il::IntOp::kAnd, il::IntOp::kOr,  il::IntOp::kXor};
constexpr il::BoolOp kBoolOps[] = {il::BoolOp::kLAnd, il::BoolOp::kLOr,
                                   il::BoolOp::kLXor};
constexpr il::CmpOp kCmpOps[] = {il::CmpOp::kEq, il::CmpOp::kNeq,
                                 il::CmpOp::kLt, il::CmpOp::kLeq,
                                 il::CmpOp::kGt, il::CmpOp::kGeq};

template <typename T, std::size_t N>
T Pick(Rng& rng, const T (&items)[N]) {
  return items[UniformIndex(rng, N)];
}

// Weighted choice; returns -1 when every weight is zero.
int WeightedChoice(Rng& rng, std::span<const double> weights) {
  double total = 0;
  for (double w : weights) total += w;
  if (total <= 0) return -1;
  double x = Uniform01(rng) * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0) continue;
    if (x < weights[i]) return static_cast<int>(i);
    x -= weights[i];
  }
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

std::string_view VariantName(Variant v) {
  return kVariantNames[static_cast<int>(v)];
}

Variant VariantFromName(std::string_view name) {
  for (std::size_t i = 0; i < kVariantNames.size(); ++i) {
    if (kVariantNames[i] == name) return static_cast<Variant>(i);
  }
  throw ConfigError("unknown generator variant '" + std::string(name) + "'");
}

std::vector<Word> DefaultLiteralPool() {
  return {0, 1, 2, 0x7FFFFFFF, 0x80000000, 0xFFFFFFFF};
}

double GenConfig::Weight(Variant v) const {
  auto it = op_weights.find(v);
  return it == op_weights.end() ? 0.0 : it->second;
}

void GenConfig::Validate() const {
  if (max_depth < 1) throw ConfigError("max_depth must be >= 1");
  if (min_inputs < 0 || max_inputs < min_inputs) {
    throw ConfigError("input range must satisfy 0 <= min <= max");
  }
  if (max_inputs > 26) throw ConfigError("at most 26 inputs are supported");
  for (const auto& [v, w] : op_weights) {
    if (!(w >= 0)) {
      throw ConfigError("weight of " + std::string(VariantName(v)) +
                        " must be non-negative");
    }
  }
  if (!(asm_weight >= 0)) throw ConfigError("asm_weight must be non-negative");
  double int_weight = Weight(Variant::kVar) + Weight(Variant::kIntLit) +
                      Weight(Variant::kIntBinOp) + Weight(Variant::kIte) +
                      (asm_extension ? asm_weight : 0.0);
  if (int_weight <= 0) {
    throw ConfigError("at least one int-producing variant needs weight > 0");
  }
  if (literal_pool.empty()) throw ConfigError("literal pool is empty");
  if (!(pool_probability >= 0 && pool_probability <= 1) ||
      !(private_input_probability >= 0 && private_input_probability <= 1)) {
    throw ConfigError("probabilities must lie in [0, 1]");
  }
}

std::string InputName(std::size_t index) {
  return std::string(1, static_cast<char>('a' + index));
}

Word DrawLiteral(Rng& rng, const GenConfig& config) {
  if (Bernoulli(rng, config.pool_probability)) {
    return config.literal_pool[UniformIndex(rng, config.literal_pool.size())];
  }
  return UniformWord(rng);
}

CircuitGenerator::CircuitGenerator(const GenConfig& config, std::uint64_t seed)
    : config_(config), rng_(seed) {
  config_.Validate();
}

il::Circuit CircuitGenerator::Generate() {
  il::Circuit c;
  int n = std::uniform_int_distribution<int>(config_.min_inputs,
                                             config_.max_inputs)(rng_);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) {
    il::Input in{InputName(i)};
    if (Bernoulli(rng_, config_.private_input_probability)) {
      in.visibility = il::Visibility::kPrivate;
    }
    names.push_back(in.name);
    c.inputs.push_back(std::move(in));
  }
  c.output_expr = GenInt(config_.max_depth, names);
  return c;
}

Expr CircuitGenerator::GenerateExpr(TypeTag type, int depth_budget,
                                    std::span<const std::string> vars) {
  return type == TypeTag::kInt ? GenInt(depth_budget, vars)
                               : GenBool(depth_budget, vars);
}

Expr CircuitGenerator::GenInt(int budget, std::span<const std::string> vars) {
  const double var_w = vars.empty() ? 0.0 : config_.Weight(Variant::kVar);
  const double lit_w = config_.Weight(Variant::kIntLit);
  const bool inner = budget >= 2;
  const double weights[] = {
      var_w,
      lit_w,
      inner ? config_.Weight(Variant::kIntBinOp) : 0.0,
      inner ? config_.Weight(Variant::kIte) : 0.0,
      inner && config_.asm_extension ? config_.asm_weight : 0.0,
  };
  int choice = WeightedChoice(rng_, weights);
  switch (choice) {
    case 0:
      return Expr::Var(vars[UniformIndex(rng_, vars.size())]);
    case 2: {
      il::IntOp op = Pick(rng_, kIntOps);
      Expr lhs = GenInt(budget - 1, vars);
      if (op == il::IntOp::kPow) {
        return Expr::IntBin(op, std::move(lhs),
                            Expr::IntLit(Bernoulli(rng_, 0.5) ? 2 : 3));
      }
      return Expr::IntBin(op, std::move(lhs), GenInt(budget - 1, vars));
    }
    case 3: {
      Expr cond = GenBool(budget - 1, vars);
      Expr then_expr = GenInt(budget - 1, vars);
      return Expr::Ite(std::move(cond), std::move(then_expr),
                       GenInt(budget - 1, vars));
    }
    case 4: {
      il::CustomFn fn =
          il::kAllCustomFns[UniformIndex(rng_, std::size(il::kAllCustomFns))];
      Expr a = GenInt(budget - 1, vars);
      return Expr::Call(fn, {std::move(a), GenInt(budget - 1, vars)});
    }
    default:
      // Literal, also the fallback when no leaf variant is enabled.
      return Expr::IntLit(DrawLiteral(rng_, config_));
  }
}

Expr CircuitGenerator::GenBool(int budget, std::span<const std::string> vars) {
  const bool inner = budget >= 2;
  const double weights[] = {
      config_.Weight(Variant::kBoolLit),
      inner ? config_.Weight(Variant::kBoolBinOp) : 0.0,
      inner ? config_.Weight(Variant::kNot) : 0.0,
      inner ? config_.Weight(Variant::kCompare) : 0.0,
  };
  switch (WeightedChoice(rng_, weights)) {
    case 1: {
      il::BoolOp op = Pick(rng_, kBoolOps);
      Expr lhs = GenBool(budget - 1, vars);
      return Expr::BoolBin(op, std::move(lhs), GenBool(budget - 1, vars));
    }
    case 2:
      return Expr::Not(GenBool(budget - 1, vars));
    case 3: {
      il::CmpOp op = Pick(rng_, kCmpOps);
      Expr lhs = GenInt(budget - 1, vars);
      return Expr::Cmp(op, std::move(lhs), GenInt(budget - 1, vars));
    }
    default:
      return Expr::BoolLit(Bernoulli(rng_, 0.5));
  }
}

il::Circuit GenerateCircuit(std::uint64_t seed, const GenConfig& config) {
  return CircuitGenerator(config, seed).Generate();
}

}  // namespace zkfuzz::gen
