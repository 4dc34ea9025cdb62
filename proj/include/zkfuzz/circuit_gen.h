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

// Seeded random generation of well-typed circuits.
//
// Generation is top-down with a depth budget: every node consumes one unit
// and leaves (an input variable or a literal) are forced when the budget
// reaches one. With the inline-assembly extension enabled, custom calls
// (mulh, mulhsu, ..., sltu) compete with the ordinary int-producing nodes.

#ifndef ZKFUZZ_CIRCUIT_GEN_H_
#define ZKFUZZ_CIRCUIT_GEN_H_

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "zkfuzz/il.h"
#include "zkfuzz/random.h"

namespace zkfuzz::gen {

using il::Word;

enum class Variant : std::uint8_t {
  kVar,
  kIntLit,
  kIntBinOp,
  kIte,
  kBoolLit,
  kBoolBinOp,
  kNot,
  kCompare,
};

inline constexpr Variant kAllVariants[] = {
    Variant::kVar,     Variant::kIntLit,    Variant::kIntBinOp,
    Variant::kIte,     Variant::kBoolLit,   Variant::kBoolBinOp,
    Variant::kNot,     Variant::kCompare};

std::string_view VariantName(Variant v);
Variant VariantFromName(std::string_view name);

// {0, 1, 2, 0x7FFFFFFF, 0x80000000, 0xFFFFFFFF}
std::vector<Word> DefaultLiteralPool();

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GenConfig {
  int max_depth = 5;
  int min_inputs = 1;
  int max_inputs = 4;
  std::map<Variant, double> op_weights = {
      {Variant::kVar, 1.0},     {Variant::kIntLit, 1.0},
      {Variant::kIntBinOp, 1.0}, {Variant::kIte, 1.0},
      {Variant::kBoolLit, 1.0}, {Variant::kBoolBinOp, 1.0},
      {Variant::kNot, 1.0},     {Variant::kCompare, 1.0}};
  bool asm_extension = false;
  double asm_weight = 1.0;
  std::vector<Word> literal_pool = DefaultLiteralPool();
  // Probability of drawing a literal from the pool rather than uniformly.
  double pool_probability = 0.5;
  double private_input_probability = 0.0;

  double Weight(Variant v) const;
  // Throws ConfigError.
  void Validate() const;

  friend bool operator==(const GenConfig&, const GenConfig&) = default;
};

// Input names used by generated circuits: a, b, c, ...
std::string InputName(std::size_t index);

// Boundary-biased literal: pool member with `pool_probability`, otherwise a
// uniform word. Shared with the rewrite engine for fresh constants.
Word DrawLiteral(Rng& rng, const GenConfig& config);

class CircuitGenerator {
 public:
  CircuitGenerator(const GenConfig& config, std::uint64_t seed);

  il::Circuit Generate();

  // Random well-typed expression over `vars` whose depth is at most
  // `depth_budget`.
  il::Expr GenerateExpr(il::TypeTag type, int depth_budget,
                        std::span<const std::string> vars);

  Rng& rng() { return rng_; }

 private:
  il::Expr GenInt(int budget, std::span<const std::string> vars);
  il::Expr GenBool(int budget, std::span<const std::string> vars);

  GenConfig config_;
  Rng rng_;
};

// Pure function of (seed, config). Throws ConfigError on an invalid config.
il::Circuit GenerateCircuit(std::uint64_t seed, const GenConfig& config);

}  // namespace zkfuzz::gen

#endif  // ZKFUZZ_CIRCUIT_GEN_H_
