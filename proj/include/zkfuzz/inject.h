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

// Fault-injection planning: the portable injection types, instruction
// mutation, and the scheduler that spreads injections evenly over the
// instruction mnemonics seen in traces.

#ifndef ZKFUZZ_INJECT_H_
#define ZKFUZZ_INJECT_H_

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zkfuzz/isa.h"
#include "zkfuzz/random.h"
#include "zkfuzz/trace.h"

namespace zkfuzz::inject {

enum class InjectionType : std::uint8_t {
  kInstrWordMod,
  kPreExecPcMod,
  kPostExecPcMod,
  kCompOutMod,
  kLoadValMod,
  kStoreOutMod,
  kPreExecRegMod,
  kPostExecRegMod,
  kPreExecMemMod,
  kPostExecMemMod,
  kBrNegCond,
};

inline constexpr InjectionType kAllInjectionTypes[] = {
    InjectionType::kInstrWordMod,   InjectionType::kPreExecPcMod,
    InjectionType::kPostExecPcMod,  InjectionType::kCompOutMod,
    InjectionType::kLoadValMod,     InjectionType::kStoreOutMod,
    InjectionType::kPreExecRegMod,  InjectionType::kPostExecRegMod,
    InjectionType::kPreExecMemMod,  InjectionType::kPostExecMemMod,
    InjectionType::kBrNegCond,
};

// "INSTR_WORD_MOD", ...
std::string_view Name(InjectionType t);
std::optional<InjectionType> InjectionTypeFromName(std::string_view name);

struct InjectionPlan {
  InjectionType type = InjectionType::kInstrWordMod;
  std::uint64_t target_step = 0;
  std::uint64_t payload_seed = 0;

  friend bool operator==(const InjectionPlan&, const InjectionPlan&) = default;
};

enum class MutationClass : std::uint8_t { kOpcode, kRd, kRs1, kRs2, kImm };

std::string_view Name(MutationClass c);

struct Mutation {
  vm::Instruction instr;
  MutationClass field = MutationClass::kOpcode;
};

// Changes exactly one field class, chosen uniformly among the classes the
// instruction's format actually has (opcode only when the format has more
// than one opcode), then uniformly within the class. Halt has no mutable
// field and is replaced by a random well-formed non-halt instruction.
Mutation MutateInstruction(const vm::Instruction& instr, Rng& rng);

vm::Instruction RandomInstruction(Rng& rng);

// Campaign-global mnemonic counters. Thread-safe.
class InjectionCounters {
 public:
  std::uint64_t Get(std::string_view mnemonic) const;
  std::map<std::string, std::uint64_t> Snapshot() const;
  void Increment(std::string_view mnemonic);

 private:
  friend struct ScheduleAccess;
  mutable std::mutex mu_;
  std::map<std::string, std::uint64_t, std::less<>> counts_;
};

struct ScheduleDecision {
  InjectionPlan plan;
  std::string mnemonic;
  // Counter values for every mnemonic in the trace, before the increment.
  std::map<std::string, std::uint64_t> counts_before;
};

class ScheduleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Picks uniformly among the least-injected mnemonics of the trace, then a
// row of that mnemonic, then an enabled type. Increments the counter of the
// chosen mnemonic atomically with the choice. Throws ScheduleError on an
// empty trace or an empty type set.
ScheduleDecision Schedule(const vm::TraceRecord& trace,
                          InjectionCounters& counters,
                          std::span<const InjectionType> enabled, Rng& rng);

}  // namespace zkfuzz::inject

#endif  // ZKFUZZ_INJECT_H_
