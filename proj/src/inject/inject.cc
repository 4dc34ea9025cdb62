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

#include "zkfuzz/inject.h"

#include <algorithm>
#include <array>
#include <set>

namespace zkfuzz::inject {

using vm::Format;
using vm::Instruction;
using vm::Opcode;

namespace {

constexpr std::array<std::string_view, 11> kTypeNames = {
    "INSTR_WORD_MOD",    "PRE_EXEC_PC_MOD",   "POST_EXEC_PC_MOD",
    "COMP_OUT_MOD",      "LOAD_VAL_MOD",      "STORE_OUT_MOD",
    "PRE_EXEC_REG_MOD",  "POST_EXEC_REG_MOD", "PRE_EXEC_MEM_MOD",
    "POST_EXEC_MEM_MOD", "BR_NEG_COND"};

constexpr std::array<std::string_view, 5> kClassNames = {"opcode", "rd", "rs1",
                                                         "rs2", "imm"};

std::uint8_t OtherRegister(std::uint8_t current, Rng& rng) {
  auto r = static_cast<std::uint8_t>(UniformIndex(rng, 31));
  return r >= current ? r + 1 : r;
}

std::int32_t RandomImm(Format f, Rng& rng) {
  vm::ImmRange r = vm::ImmRangeOf(f);
  std::int64_t slots = (static_cast<std::int64_t>(r.max) - r.min) / r.align + 1;
  return static_cast<std::int32_t>(
      r.min + static_cast<std::int64_t>(UniformIndex(rng, slots)) * r.align);
}

std::int32_t OtherImm(Format f, std::int32_t current, Rng& rng) {
  vm::ImmRange r = vm::ImmRangeOf(f);
  std::int64_t slots = (static_cast<std::int64_t>(r.max) - r.min) / r.align + 1;
  std::int64_t cur_slot = (static_cast<std::int64_t>(current) - r.min) / r.align;
  bool in_range = current >= r.min && current <= r.max &&
                  (current - r.min) % r.align == 0;
  if (!in_range) return RandomImm(f, rng);
  std::int64_t s = static_cast<std::int64_t>(UniformIndex(rng, slots - 1));
  if (s >= cur_slot) ++s;
  return static_cast<std::int32_t>(r.min + s * r.align);
}

}  // namespace

std::string_view Name(InjectionType t) {
  return kTypeNames[static_cast<int>(t)];
}

std::optional<InjectionType> InjectionTypeFromName(std::string_view name) {
  for (std::size_t i = 0; i < kTypeNames.size(); ++i) {
    if (kTypeNames[i] == name) return static_cast<InjectionType>(i);
  }
  return std::nullopt;
}

std::string_view Name(MutationClass c) {
  return kClassNames[static_cast<int>(c)];
}

Instruction RandomInstruction(Rng& rng) {
  Instruction in;
  in.op = static_cast<Opcode>(UniformIndex(rng, vm::kNumOpcodes - 1));
  Format f = vm::FormatOf(in.op);
  if (vm::HasRd(f)) in.rd = static_cast<std::uint8_t>(UniformIndex(rng, 32));
  if (vm::HasRs1(f)) in.rs1 = static_cast<std::uint8_t>(UniformIndex(rng, 32));
  if (vm::HasRs2(f)) in.rs2 = static_cast<std::uint8_t>(UniformIndex(rng, 32));
  in.imm = f == Format::kR ? 0 : RandomImm(f, rng);
  return in;
}

Mutation MutateInstruction(const Instruction& instr, Rng& rng) {
  const Format f = vm::FormatOf(instr.op);
  if (f == Format::kSys) {
    return {RandomInstruction(rng), MutationClass::kOpcode};
  }
  std::vector<MutationClass> classes;
  if (vm::OpcodesOf(f).size() > 1) classes.push_back(MutationClass::kOpcode);
  if (vm::HasRd(f)) classes.push_back(MutationClass::kRd);
  if (vm::HasRs1(f)) classes.push_back(MutationClass::kRs1);
  if (vm::HasRs2(f)) classes.push_back(MutationClass::kRs2);
  if (vm::HasImm(f)) classes.push_back(MutationClass::kImm);

  Mutation m{instr, classes[UniformIndex(rng, classes.size())]};
  switch (m.field) {
    case MutationClass::kOpcode: {
      auto ops = vm::OpcodesOf(f);
      auto cur = std::find(ops.begin(), ops.end(), instr.op) - ops.begin();
      auto i = static_cast<std::ptrdiff_t>(UniformIndex(rng, ops.size() - 1));
      m.instr.op = ops[i >= cur ? i + 1 : i];
      break;
    }
    case MutationClass::kRd:
      m.instr.rd = OtherRegister(instr.rd, rng);
      break;
    case MutationClass::kRs1:
      m.instr.rs1 = OtherRegister(instr.rs1, rng);
      break;
    case MutationClass::kRs2:
      m.instr.rs2 = OtherRegister(instr.rs2, rng);
      break;
    case MutationClass::kImm:
      m.instr.imm = OtherImm(f, instr.imm, rng);
      break;
  }
  return m;
}

std::uint64_t InjectionCounters::Get(std::string_view mnemonic) const {
  std::lock_guard lock(mu_);
  auto it = counts_.find(mnemonic);
  return it == counts_.end() ? 0 : it->second;
}

std::map<std::string, std::uint64_t> InjectionCounters::Snapshot() const {
  std::lock_guard lock(mu_);
  return {counts_.begin(), counts_.end()};
}

void InjectionCounters::Increment(std::string_view mnemonic) {
  std::lock_guard lock(mu_);
  auto it = counts_.find(mnemonic);
  if (it == counts_.end()) {
    counts_.emplace(std::string(mnemonic), 1);
  } else {
    ++it->second;
  }
}

struct ScheduleAccess {
  static ScheduleDecision Run(const vm::TraceRecord& trace,
                              InjectionCounters& counters,
                              std::span<const InjectionType> enabled,
                              Rng& rng) {
    if (trace.rows.empty()) throw ScheduleError("cannot schedule on an empty trace");
    if (enabled.empty()) throw ScheduleError("no injection type enabled");
    std::set<std::string_view> present;
    for (const vm::TraceRow& r : trace.rows) {
      present.insert(vm::Mnemonic(r.instr.op));
    }
    std::lock_guard lock(counters.mu_);
    ScheduleDecision d;
    std::uint64_t best = UINT64_MAX;
    for (std::string_view m : present) {
      auto it = counters.counts_.find(m);
      std::uint64_t c = it == counters.counts_.end() ? 0 : it->second;
      d.counts_before.emplace(std::string(m), c);
      best = std::min(best, c);
    }
    std::vector<std::string_view> argmin;
    for (const auto& [m, c] : d.counts_before) {
      if (c == best) argmin.push_back(m);
    }
    d.mnemonic = std::string(argmin[UniformIndex(rng, argmin.size())]);
    std::vector<std::uint64_t> rows;
    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
      if (vm::Mnemonic(trace.rows[i].instr.op) == d.mnemonic) rows.push_back(i);
    }
    d.plan.target_step = rows[UniformIndex(rng, rows.size())];
    d.plan.type = enabled[UniformIndex(rng, enabled.size())];
    d.plan.payload_seed = rng();
    ++counters.counts_[d.mnemonic];
    return d;
  }
};

ScheduleDecision Schedule(const vm::TraceRecord& trace,
                          InjectionCounters& counters,
                          std::span<const InjectionType> enabled, Rng& rng) {
  return ScheduleAccess::Run(trace, counters, enabled, rng);
}

}  // namespace zkfuzz::inject
