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

#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracle.h"
#include "zkfuzz/circuit_gen.h"
#include "zkfuzz/codegen.h"
#include "zkfuzz/rewrite.h"

namespace zkfuzz::codegen {
namespace {

using il::Word;

il::Circuit C(const std::string& expr) {
  return il::ParseCircuit("inputs : a, b, c\noutputs: out\nout = " + expr + "\n");
}

std::string Golden(const std::string& name) {
  std::ifstream in(std::string(ZKFUZZ_GOLDEN_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t CountOp(const vm::RefProgram& p, vm::Opcode op) {
  std::size_t n = 0;
  for (const vm::Instruction& i : p.code) n += i.op == op;
  return n;
}

// Product semantics from the test oracle: success iff all outputs agree.
Word OracleProduct(const std::vector<il::Circuit>& cs, const std::vector<Word>& in) {
  std::map<std::string, Word> env;
  for (std::size_t i = 0; i < cs[0].inputs.size(); ++i) env[cs[0].inputs[i].name] = in[i];
  const Word first = oracle::Eval(cs[0].output_expr, env);
  for (const il::Circuit& c : cs) {
    if (oracle::Eval(c.output_expr, env) != first) return kOopsWord;
  }
  return kSuccessWord;
}

TEST(Rust, RemainderFunction) {
  SourceFunction f = EmitFunction(C("(a % (b + c))"), "c1");
  EXPECT_EQ(f.arity, 3u);
  EXPECT_NE(f.text.find("fn c1(a: u32, b: u32, c: u32) -> u32"), std::string::npos);
  EXPECT_NE(f.text.find("checked_rem(b.wrapping_add(c))"), std::string::npos);
}

TEST(Rust, IdentityFunction) {
  il::Circuit id{{{"a"}}, "out", il::Expr::Var("a")};
  EXPECT_EQ(EmitFunction(id, "c1").text, "fn c1(a: u32) -> u32 {\n  a\n}\n");
}

TEST(Rust, MulhsuUsesAsmMacro) {
  SourceFunction f = EmitFunction(C("mulhsu(a, (b + c))"), "c1");
  EXPECT_NE(f.text.find("macro_rules! mulhsu"), std::string::npos);
  EXPECT_NE(f.text.find("\"mulhsu {result}, {a}, {b}\""), std::string::npos);
  EXPECT_NE(f.text.find("mulhsu!(a, b.wrapping_add(c))"), std::string::npos);
}

TEST(Rust, SignedCustomCallsUseIsaMnemonics) {
  EXPECT_NE(EmitFunction(C("divs(a, b)"), "c1").text.find("\"div {result}"), std::string::npos);
  EXPECT_NE(EmitFunction(C("rems(a, b)"), "c1").text.find("\"rem {result}"), std::string::npos);
}

TEST(Rust, ProductGoldenFiles) {
  EXPECT_EQ(EmitProductSource(MakeProduct({C("(a % (b + c))"), C("(a % ((c + 0) + b))")})),
            Golden("remainder_product.rs"));
  EXPECT_EQ(EmitProductSource(MakeProduct({C("mulhsu(a, (b + c))"), C("mulhsu(a, (b + c))")})),
            Golden("mulhsu_product.rs"));
}

TEST(Rust, ThreeFunctionsChainTwoChecks) {
  std::string src = EmitProductSource(
      MakeProduct({C("(a + b)"), C("(b + a)"), C("((a + b) + 0)")}));
  EXPECT_NE(src.find("if c1_out != c2_out {"), std::string::npos);
  EXPECT_NE(src.find("} else if c2_out != c3_out {"), std::string::npos);
  EXPECT_NE(src.find("#[zkvm::entry(main)]"), std::string::npos);
}

TEST(Rust, CustomEntryTemplate) {
  SourceOptions opts;
  opts.entry_annotation = "#[sp1_zkvm::entrypoint]";
  opts.prologue = "let a = sp1_zkvm::io::read::<u32>();";
  std::string src = EmitProductSource(MakeProduct({C("a"), C("a")}), opts);
  EXPECT_NE(src.find("#[sp1_zkvm::entrypoint]"), std::string::npos);
  EXPECT_NE(src.find("let a = sp1_zkvm::io::read::<u32>();"), std::string::npos);
}

TEST(Product, Semantics) {
  ProductProgram good = MakeProduct({C("(a % (b + c))"), C("(a % ((c + 0) + b))")});
  EXPECT_EQ(ProductSemantics(good, std::vector<Word>{7, 3, 2}), kSuccessWord);
  il::Circuit a{{{"a"}}, "out", il::Expr::Var("a")};
  il::Circuit a1{{{"a"}}, "out", il::ParseExpr("(a + 1)")};
  EXPECT_EQ(ProductSemantics(MakeProduct({a, a1}), std::vector<Word>{9}), 0x0u);
}

TEST(Product, Errors) {
  EXPECT_THROW(MakeProduct({C("a")}), ProductError);
  il::Circuit other{{{"x"}}, "out", il::Expr::Var("x")};
  EXPECT_THROW(MakeProduct({C("a"), other}), ProductError);
}

TEST(Compile, RemainderPairHasTwoRemu) {
  vm::RefProgram p = CompileToRefVm(MakeProduct({C("(a % (b + c))"), C("(a % ((c + 0) + b))")}));
  EXPECT_EQ(CountOp(p, vm::Opcode::kRemu), 2u);
  EXPECT_EQ(p.input_count, 3u);
  EXPECT_FALSE(vm::ValidateProgram(p));
  EXPECT_EQ(p.code.back().op, vm::Opcode::kHalt);
}

TEST(Compile, MulhsuCircuitCompilesToMulhsu) {
  vm::RefProgram p = CompileToRefVm(MakeProduct({C("mulhsu(a, (b + c))"), C("mulhsu(a, (c + b))")}));
  EXPECT_EQ(CountOp(p, vm::Opcode::kMulhsu), 2u);
  EXPECT_EQ(vm::Execute(p, std::vector<Word>{0xFFFFFFFF, 1, 1}).trace.final_output, kSuccessWord);
}

TEST(Compile, OperatorMapping) {
  struct Case {
    const char* expr;
    vm::Opcode op;
  } cases[] = {{"(a / b)", vm::Opcode::kDivu},   {"(a % b)", vm::Opcode::kRemu},
               {"divs(a, b)", vm::Opcode::kDiv}, {"rems(a, b)", vm::Opcode::kRem},
               {"(a ** 2)", vm::Opcode::kMul},   {"sra(a, b)", vm::Opcode::kSra},
               {"ite((a < b), a, b)", vm::Opcode::kSltu}};
  for (const Case& c : cases) {
    vm::RefProgram p = CompileToRefVm(MakeProduct({C(c.expr), C(c.expr)}));
    EXPECT_GE(CountOp(p, c.op), 2u) << c.expr;
  }
}

TEST(Compile, DeepExpressionsSpill) {
  // A right-leaning chain deeper than the register pool.
  std::string e = "a";
  for (int i = 0; i < 14; ++i) e = "(b - (" + e + " * c))";
  std::string f = "a";
  for (int i = 0; i < 14; ++i) f = "(b - (c * " + f + "))";
  std::vector<il::Circuit> cs = {C(e), C(f)};
  vm::RefProgram p = CompileToRefVm(MakeProduct(cs));
  for (std::vector<Word> in : {std::vector<Word>{1, 2, 3}, {0xFFFFFFFF, 7, 0x80000000}}) {
    EXPECT_EQ(vm::Execute(p, in).trace.final_output, OracleProduct(cs, in));
  }
}

TEST(Compile, DifferentialAgainstSemantics) {
  gen::GenConfig cfg;
  cfg.asm_extension = true;
  cfg.max_depth = 6;
  std::mt19937_64 rng(21);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    std::vector<il::Circuit> cs = {gen::GenerateCircuit(seed, cfg)};
    cs.push_back(seed % 3 == 0 ? gen::GenerateCircuit(seed + 100000, cfg) : cs[0]);
    if (cs[1].inputs != cs[0].inputs) cs[1] = cs[0];
    ProductProgram prod = MakeProduct(cs);
    vm::RefProgram p = CompileToRefVm(prod);
    for (int r = 0; r < 5; ++r) {
      std::vector<Word> in;
      for (std::size_t i = 0; i < prod.arity(); ++i) {
        in.push_back(r % 2 ? static_cast<Word>(rng()) : static_cast<Word>(rng() % 3));
      }
      vm::ExecResult res = vm::Execute(p, in);
      ASSERT_EQ(res.trace.exit, vm::ExitStatus::kClean);
      ASSERT_EQ(res.trace.final_output, ProductSemantics(prod, in));
      ASSERT_EQ(res.trace.final_output, OracleProduct(cs, in));
    }
  }
}

TEST(Compile, TransformedProductsSucceed) {
  gen::GenConfig cfg;
  Rng rng(22);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    il::Circuit c = gen::GenerateCircuit(seed, cfg);
    std::vector<il::Circuit> cs = {c};
    for (int j = 0; j < 3; ++j) {
      cs.push_back(rewrite::Transform(c, rewrite::Catalog(), 4, rng, cfg).circuit);
    }
    vm::RefProgram p = CompileToRefVm(MakeProduct(cs));
    std::vector<Word> in(c.arity());
    for (Word& w : in) w = UniformWord(rng);
    ASSERT_EQ(vm::Execute(p, in).trace.final_output, kSuccessWord);
  }
}

TEST(Compile, Deterministic) {
  gen::GenConfig cfg;
  il::Circuit c = gen::GenerateCircuit(5, cfg);
  vm::RefProgram p1 = CompileToRefVm(MakeProduct({c, c}));
  vm::RefProgram p2 = CompileToRefVm(MakeProduct({c, c}));
  EXPECT_EQ(p1.code, p2.code);
  EXPECT_EQ(vm::DisassembleProgram(p1), vm::DisassembleProgram(p2));
  EXPECT_EQ(EmitProductSource(MakeProduct({c, c})), EmitProductSource(MakeProduct({c, c})));
}

}  // namespace
}  // namespace zkfuzz::codegen
