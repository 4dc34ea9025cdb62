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

#include <thread>

#include <gtest/gtest.h>

#include "zkfuzz/inject.h"

namespace zkfuzz::inject {
namespace {

using vm::Instruction;
using vm::Opcode;

constexpr std::uint8_t t0 = 5, t1 = 6, t2 = 7;

vm::TraceRecord TraceOf(const std::vector<Opcode>& ops) {
  vm::TraceRecord t;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    vm::TraceRow row;
    row.step = i;
    row.pc = static_cast<vm::Word>(4 * i);
    row.instr.op = ops[i];
    t.rows.push_back(row);
  }
  return t;
}

TEST(Names, RoundTrip) {
  for (InjectionType t : kAllInjectionTypes) {
    EXPECT_EQ(InjectionTypeFromName(Name(t)), t);
  }
  EXPECT_EQ(Name(InjectionType::kInstrWordMod), "INSTR_WORD_MOD");
  EXPECT_EQ(Name(InjectionType::kBrNegCond), "BR_NEG_COND");
  EXPECT_FALSE(InjectionTypeFromName("BIT_FLIP"));
}

TEST(Mutate, RemuDivisorCanAliasDividend) {
  const Instruction remu{Opcode::kRemu, t2, t0, t1, 0};
  bool found = false;
  for (std::uint64_t s = 0; s < 10000 && !found; ++s) {
    Rng g(s);
    Mutation m = MutateInstruction(remu, g);
    if (m.field == MutationClass::kRs2 && m.instr.rs2 == t0) {
      EXPECT_EQ(m.instr, (Instruction{Opcode::kRemu, t2, t0, t0, 0}));
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Mutate, AddReachesEveryFieldClass) {
  const Instruction add{Opcode::kAdd, t2, t0, t1, 0};
  std::map<MutationClass, int> seen;
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    Mutation m = MutateInstruction(add, rng);
    ++seen[m.field];
    ASSERT_NE(m.instr, add);
    ASSERT_TRUE(vm::IsWellFormed(m.instr)) << vm::Disassemble(m.instr);
    // Exactly the chosen class differs.
    ASSERT_EQ(m.instr.op != add.op, m.field == MutationClass::kOpcode);
    ASSERT_EQ(m.instr.rd != add.rd, m.field == MutationClass::kRd);
    ASSERT_EQ(m.instr.rs1 != add.rs1, m.field == MutationClass::kRs1);
    ASSERT_EQ(m.instr.rs2 != add.rs2, m.field == MutationClass::kRs2);
    ASSERT_EQ(m.instr.imm != add.imm, m.field == MutationClass::kImm);
  }
  for (MutationClass c : {MutationClass::kOpcode, MutationClass::kRd, MutationClass::kRs1,
                          MutationClass::kRs2, MutationClass::kImm}) {
    EXPECT_GT(seen[c], 0) << Name(c);
  }
}

TEST(Mutate, OutputIsAlwaysWellFormed) {
  Rng rng(2);
  for (int i = 0; i < 20000; ++i) {
    Instruction base = i % 10 == 0 ? Instruction{} : RandomInstruction(rng);
    ASSERT_TRUE(vm::IsWellFormed(base));
    Mutation m = MutateInstruction(base, rng);
    ASSERT_TRUE(vm::IsWellFormed(m.instr)) << vm::Disassemble(m.instr);
    ASSERT_NE(m.instr, base);
    if (base.op == Opcode::kHalt) {
      ASSERT_NE(m.instr.op, Opcode::kHalt);
    }
    if (m.field != MutationClass::kOpcode && base.op != Opcode::kHalt) {
      ASSERT_EQ(m.instr.op, base.op);
    }
  }
}

TEST(Mutate, OpcodeStaysWithinFormat) {
  Rng rng(3);
  const Instruction lui{Opcode::kLui, t0, 0, 0, 5};
  for (int i = 0; i < 2000; ++i) {
    Mutation m = MutateInstruction(lui, rng);
    ASSERT_EQ(vm::FormatOf(m.instr.op), vm::Format::kU);
  }
  const Instruction jal{Opcode::kJal, 1, 0, 0, 8};
  for (int i = 0; i < 2000; ++i) {
    // J has a single opcode, so only rd and the offset can change.
    Mutation m = MutateInstruction(jal, rng);
    ASSERT_NE(m.field, MutationClass::kOpcode);
  }
}

TEST(Schedule, PrefersLeastInjectedMnemonic) {
  vm::TraceRecord t = TraceOf({Opcode::kAdd, Opcode::kRemu, Opcode::kAdd, Opcode::kRemu});
  InjectionCounters counters;
  for (int i = 0; i < 5; ++i) counters.Increment("add");
  const InjectionType types[] = {InjectionType::kInstrWordMod};
  Rng rng(4);
  ScheduleDecision d = Schedule(t, counters, types, rng);
  EXPECT_EQ(d.mnemonic, "remu");
  EXPECT_EQ(t.rows[d.plan.target_step].instr.op, Opcode::kRemu);
  EXPECT_EQ(d.counts_before.at("add"), 5u);
  EXPECT_EQ(d.counts_before.at("remu"), 0u);
  EXPECT_EQ(counters.Get("remu"), 1u);
  EXPECT_EQ(d.plan.type, InjectionType::kInstrWordMod);
}

TEST(Schedule, RowChoiceIsUniform) {
  std::vector<Opcode> ops(43, Opcode::kAdd);
  ops[10] = ops[42] = Opcode::kRemu;
  vm::TraceRecord t = TraceOf(ops);
  const InjectionType types[] = {InjectionType::kCompOutMod};
  Rng rng(5);
  std::map<std::uint64_t, int> hits;
  int remu_picks = 0;
  for (int i = 0; i < 10000; ++i) {
    InjectionCounters fresh;  // all counters equal
    ScheduleDecision d = Schedule(t, fresh, types, rng);
    if (d.mnemonic == "remu") {
      ++remu_picks;
      ++hits[d.plan.target_step];
    }
  }
  ASSERT_EQ(hits.size(), 2u);
  // Mnemonic choice among the tied set is uniform as well.
  EXPECT_NEAR(remu_picks / 10000.0, 0.5, 0.05);
  const double p10 = static_cast<double>(hits[10]) / remu_picks;
  EXPECT_NEAR(p10, 0.5, 0.05);
  // Chi-square with one degree of freedom; 10.83 is the 0.001 critical value.
  const double e = remu_picks / 2.0;
  const double chi2 = (hits[10] - e) * (hits[10] - e) / e + (hits[42] - e) * (hits[42] - e) / e;
  EXPECT_LT(chi2, 10.83);
}

TEST(Schedule, SingleRowTrace) {
  vm::TraceRecord t = TraceOf({Opcode::kHalt});
  InjectionCounters counters;
  const InjectionType types[] = {InjectionType::kPreExecRegMod};
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(Schedule(t, counters, types, rng).plan.target_step, 0u);
  }
}

TEST(Schedule, TypesAreDrawnFromEnabledSet) {
  vm::TraceRecord t = TraceOf({Opcode::kAdd, Opcode::kHalt});
  InjectionCounters counters;
  const InjectionType types[] = {InjectionType::kLoadValMod, InjectionType::kBrNegCond};
  Rng rng(7);
  std::set<InjectionType> seen;
  for (int i = 0; i < 200; ++i) seen.insert(Schedule(t, counters, types, rng).plan.type);
  EXPECT_EQ(seen, (std::set<InjectionType>{InjectionType::kLoadValMod,
                                           InjectionType::kBrNegCond}));
}

TEST(Schedule, Errors) {
  InjectionCounters counters;
  Rng rng(8);
  const InjectionType types[] = {InjectionType::kInstrWordMod};
  EXPECT_THROW(Schedule(vm::TraceRecord{}, counters, types, rng), ScheduleError);
  EXPECT_THROW(Schedule(TraceOf({Opcode::kHalt}), counters, {}, rng), ScheduleError);
}

TEST(Schedule, AlwaysPicksFromArgminAndStaysBalanced) {
  const std::vector<Opcode> pool = {Opcode::kAdd, Opcode::kSub, Opcode::kMul,
                                    Opcode::kRemu, Opcode::kLw, Opcode::kSw};
  InjectionCounters counters;
  const InjectionType types[] = {InjectionType::kInstrWordMod};
  Rng rng(9);
  for (int round = 0; round < 600; ++round) {
    std::vector<Opcode> ops;
    for (int i = 0; i < 8; ++i) ops.push_back(pool[UniformIndex(rng, pool.size())]);
    vm::TraceRecord t = TraceOf(ops);
    ScheduleDecision d = Schedule(t, counters, types, rng);
    std::uint64_t min = UINT64_MAX;
    for (const auto& [m, c] : d.counts_before) min = std::min(min, c);
    ASSERT_EQ(d.counts_before.at(d.mnemonic), min);
  }
  auto snap = counters.Snapshot();
  std::uint64_t lo = UINT64_MAX, hi = 0;
  for (const auto& [m, c] : snap) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  EXPECT_LE(hi - lo, 2u);
}

TEST(Counters, ConcurrentIncrements) {
  InjectionCounters counters;
  std::vector<std::jthread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] {
      for (int k = 0; k < 1000; ++k) counters.Increment("add");
    });
  }
  threads.clear();
  EXPECT_EQ(counters.Get("add"), 8000u);
  EXPECT_EQ(counters.Get("sub"), 0u);
}

}  // namespace
}  // namespace zkfuzz::inject
