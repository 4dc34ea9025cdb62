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

#include <functional>
#include <set>

#include <gtest/gtest.h>

#include "zkfuzz/circuit_gen.h"

namespace zkfuzz::gen {
namespace {

void Walk(const il::Expr& e, const std::function<void(const il::Expr&)>& fn) {
  fn(e);
  for (const il::Expr& c : e.children()) Walk(c, fn);
}

TEST(Generator, SameSeedSameCircuit) {
  GenConfig cfg;
  for (std::uint64_t seed : {0ull, 1ull, 99ull, 0xFFFFFFFFFFFFull}) {
    EXPECT_EQ(GenerateCircuit(seed, cfg), GenerateCircuit(seed, cfg));
  }
  EXPECT_NE(il::RenderCircuit(GenerateCircuit(1, cfg)),
            il::RenderCircuit(GenerateCircuit(2, cfg)));
}

TEST(Generator, NoCustomCallsWithoutAsmExtension) {
  GenConfig cfg;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Walk(GenerateCircuit(seed, cfg).output_expr, [](const il::Expr& e) {
      ASSERT_NE(e.kind(), il::ExprKind::kCall);
    });
  }
}

TEST(Generator, AsmExtensionReachesEveryCustomFunction) {
  GenConfig cfg;
  cfg.asm_extension = true;
  cfg.asm_weight = 2.0;
  std::map<il::CustomFn, int> seen;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Walk(GenerateCircuit(seed, cfg).output_expr, [&](const il::Expr& e) {
      if (e.kind() == il::ExprKind::kCall) ++seen[e.custom_fn()];
    });
  }
  for (il::CustomFn fn : il::kAllCustomFns) {
    EXPECT_GE(seen[fn], 1) << il::Name(fn);
  }
}

TEST(Generator, StructuralInvariants) {
  for (bool asm_ext : {false, true}) {
    for (int depth : {1, 2, 4, 6}) {
      GenConfig cfg;
      cfg.asm_extension = asm_ext;
      cfg.max_depth = depth;
      cfg.min_inputs = 0;
      cfg.max_inputs = 5;
      for (std::uint64_t seed = 0; seed < 300; ++seed) {
        il::Circuit c = GenerateCircuit(seed, cfg);
        ASSERT_NO_THROW(il::ValidateCircuit(c)) << il::RenderCircuit(c);
        ASSERT_LE(c.output_expr.Depth(), static_cast<std::size_t>(depth));
        ASSERT_LE(c.arity(), 5u);
        Walk(c.output_expr, [](const il::Expr& e) {
          if (e.kind() == il::ExprKind::kIntBin && e.int_op() == il::IntOp::kPow) {
            ASSERT_EQ(e.child(1).kind(), il::ExprKind::kIntLit);
            ASSERT_TRUE(e.child(1).int_value() == 2 || e.child(1).int_value() == 3);
          }
        });
      }
    }
  }
}

TEST(Generator, InputCountRangeIsCovered) {
  GenConfig cfg;
  cfg.min_inputs = 2;
  cfg.max_inputs = 4;
  std::set<std::size_t> arities;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    arities.insert(GenerateCircuit(seed, cfg).arity());
  }
  EXPECT_EQ(arities, (std::set<std::size_t>{2, 3, 4}));
  EXPECT_EQ(InputName(0), "a");
  EXPECT_EQ(InputName(2), "c");
}

TEST(Generator, PrivateInputs) {
  GenConfig cfg;
  cfg.private_input_probability = 1.0;
  for (const il::Input& in : GenerateCircuit(3, cfg).inputs) {
    EXPECT_EQ(in.visibility, il::Visibility::kPrivate);
  }
}

TEST(Generator, InvalidConfigs) {
  GenConfig cfg;
  cfg.max_depth = 0;
  EXPECT_THROW(GenerateCircuit(1, cfg), ConfigError);
  cfg = {};
  cfg.min_inputs = 3;
  cfg.max_inputs = 2;
  EXPECT_THROW(GenerateCircuit(1, cfg), ConfigError);
  cfg = {};
  cfg.op_weights[Variant::kIntBinOp] = -1;
  EXPECT_THROW(GenerateCircuit(1, cfg), ConfigError);
  cfg = {};
  cfg.pool_probability = 1.5;
  EXPECT_THROW(GenerateCircuit(1, cfg), ConfigError);
}

TEST(Generator, LiteralsComeFromPoolOrUniform) {
  GenConfig cfg;
  cfg.pool_probability = 1.0;
  Rng rng(5);
  const auto pool = DefaultLiteralPool();
  std::set<Word> seen;
  for (int i = 0; i < 1000; ++i) {
    Word w = DrawLiteral(rng, cfg);
    ASSERT_NE(std::find(pool.begin(), pool.end(), w), pool.end());
    seen.insert(w);
  }
  EXPECT_EQ(seen.size(), pool.size());
}

TEST(Generator, VariantNames) {
  for (Variant v : kAllVariants) EXPECT_EQ(VariantFromName(VariantName(v)), v);
  EXPECT_THROW(VariantFromName("nope"), ConfigError);
}

}  // namespace
}  // namespace zkfuzz::gen
