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

// Execution traces and the sparse data memory shared by the executor and
// the verifier's shadow machine.

#ifndef ZKFUZZ_TRACE_H_
#define ZKFUZZ_TRACE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zkfuzz/isa.h"

namespace zkfuzz::vm {

// Little-endian byte-addressable memory backed by a sparse map of aligned
// words. Unwritten memory reads as zero.
class Memory {
 public:
  Word Load(Word addr, unsigned width) const;
  void Store(Word addr, unsigned width, Word value);
  const std::map<Word, Word>& words() const { return words_; }

 private:
  std::map<Word, Word> words_;
};

struct TraceRow {
  std::uint64_t step = 0;
  Word pc = 0;
  Instruction instr;
  // Operand values actually read; zero for operands the format lacks.
  Word rs1_val = 0;
  Word rs2_val = 0;
  // Value of rd after the write (zero for x0 and for formats without rd).
  Word rd_val = 0;
  // Memory effect. For loads mem_val is the raw value read (width bytes,
  // zero-extended); for stores it is the value written.
  std::optional<Word> mem_addr;
  std::optional<Word> mem_val;
  Word next_pc = 0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

enum class ExitStatus : std::uint8_t { kClean, kFault, kBudgetExceeded };

std::string_view ExitStatusName(ExitStatus s);
std::optional<ExitStatus> ExitStatusFromName(std::string_view name);

struct TraceRecord {
  std::vector<TraceRow> rows;
  Word final_output = 0;
  ExitStatus exit = ExitStatus::kClean;
  std::string fault;  // description when exit == kFault

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

class TraceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tab-separated dump, one row per line:
//   step pc mnemonic rd rs1 rs2 imm rs1_val rs2_val rd_val mem_addr mem_val
//   next_pc
// All numbers are hex; absent memory fields are "-". The first line is a
// "# final_output=... exit=..." header.
std::string DumpTrace(const TraceRecord& trace);
TraceRecord ParseTrace(std::string_view text);

}  // namespace zkfuzz::vm

#endif  // ZKFUZZ_TRACE_H_
