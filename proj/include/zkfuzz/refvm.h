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

// The bundled reference zkVM. The executor runs a program on concrete inputs
// and records a trace; the verifier replays a shadow machine over the trace
// and checks it against the program, standing in for proof verification.
// A closed catalog of seeded weaknesses removes individual checks
// (soundness holes) or adds spurious rejections (completeness defects).
//
// Constraint ids reported by the verifier:
//   C1  fetched instruction (opcode, rd, imm) equals program[pc]
//   C2  operand values equal the shadow registers named by program[pc]
//   C3  rd_val and memory address follow ISA semantics
//   C4  control flow: step numbering, first pc, next_pc, row continuity
//   C5  memory: loads see the shadow memory, stores write rs2, inputs are
//       read-only
//   C6  trace ends in halt and final_output equals shadow a0
//   LEN trace-length checks (only added by completeness defects)

#ifndef ZKFUZZ_REFVM_H_
#define ZKFUZZ_REFVM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zkfuzz/inject.h"
#include "zkfuzz/isa.h"
#include "zkfuzz/trace.h"

namespace zkfuzz::vm {

inline constexpr std::string_view kRefVmId = "refvm";
inline constexpr std::string_view kRefVmVersion = "1.0";

inline constexpr unsigned kOutputReg = 10;  // a0
inline constexpr Word kDefaultInputBase = 0x100;
inline constexpr std::uint64_t kDefaultStepBudget = 1'000'000;

struct RefProgram {
  std::vector<Instruction> code;
  Word input_base = kDefaultInputBase;
  std::size_t input_count = 0;
  // Labels for the disassembly listing: (instruction index, name).
  std::vector<std::pair<std::size_t, std::string>> labels;

  Word input_end() const {
    return input_base + static_cast<Word>(4 * input_count);
  }
};

// Every instruction well-formed, exactly one halt and it is last, all
// branch/jump targets inside the program. Returns the first problem.
std::optional<std::string> ValidateProgram(const RefProgram& program);
std::string DisassembleProgram(const RefProgram& program);

enum class Weakness : std::uint8_t {
  kTriReg,         // W_TRIREG: rs2 operand of R-type unconstrained
  kStoreLow,       // W_STORE_LOW: low byte of stored/loaded values unchecked
  kLuiImm,         // W_LUI_IMM: lui immediate unconstrained
  kShortTrace,     // D_SHORT_TRACE: traces under 256 rows rejected
  kCycleOffByOne,  // D_CYCLE_OFF_BY_ONE: miscounted rows fail a padding check
};

inline constexpr Weakness kAllWeaknesses[] = {
    Weakness::kTriReg, Weakness::kStoreLow, Weakness::kLuiImm,
    Weakness::kShortTrace, Weakness::kCycleOffByOne};

std::string_view Name(Weakness w);
std::optional<Weakness> WeaknessFromName(std::string_view name);
bool IsSoundnessWeakness(Weakness w);

class WeaknessSet {
 public:
  WeaknessSet() = default;
  WeaknessSet(std::initializer_list<Weakness> ws) {
    for (Weakness w : ws) Set(w);
  }
  bool Has(Weakness w) const { return bits_ & Bit(w); }
  void Set(Weakness w, bool on = true) {
    bits_ = on ? (bits_ | Bit(w)) : (bits_ & ~Bit(w));
  }
  bool empty() const { return bits_ == 0; }
  std::vector<std::string> Names() const;
  // Throws std::invalid_argument on an unknown name.
  static WeaknessSet FromNames(std::span<const std::string> names);

  friend bool operator==(const WeaknessSet&, const WeaknessSet&) = default;

 private:
  static unsigned Bit(Weakness w) { return 1u << static_cast<unsigned>(w); }
  unsigned bits_ = 0;
};

struct ExecOptions {
  std::uint64_t step_budget = kDefaultStepBudget;
  // Present for an injected run. Injected runs are lenient: misaligned
  // memory accesses are performed bytewise instead of faulting.
  std::optional<inject::InjectionPlan> plan;
};

struct AppliedFault {
  inject::InjectionType type = inject::InjectionType::kInstrWordMod;
  std::uint64_t step = 0;
  // False when the type does not apply to the targeted instruction (for
  // example LOAD_VAL_MOD on an add); the run is then unperturbed.
  bool effective = false;
  std::string description;
};

struct ExecResult {
  TraceRecord trace;
  std::optional<AppliedFault> fault;
};

ExecResult Execute(const RefProgram& program, std::span<const Word> inputs,
                   const ExecOptions& options = {});

struct Bypass {
  Weakness weakness;
  std::string constraint;
  std::size_t row = 0;
};

struct VerifyResult {
  bool accepted = false;
  std::string constraint;  // violated constraint id when rejected
  std::size_t row = 0;
  std::string detail;
  // Checks a weakness skipped that would otherwise have failed.
  std::vector<Bypass> bypasses;
};

// The verifier gets the public statement (program and inputs) and the
// trace. It never sees executor state.
VerifyResult Verify(const RefProgram& program, std::span<const Word> inputs,
                    const TraceRecord& trace, const WeaknessSet& weaknesses);

}  // namespace zkfuzz::vm

#endif  // ZKFUZZ_REFVM_H_
