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

// The RV32IM subset executed by the reference VM, plus the halt pseudo-op.
// Instructions are kept decoded; there is no binary encoding. Immediates are
// stored the way the assembler writes them: U-type holds the 20-bit upper
// immediate, branch and jump offsets are byte offsets.

#ifndef ZKFUZZ_ISA_H_
#define ZKFUZZ_ISA_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace zkfuzz::vm {

using Word = std::uint32_t;

enum class Opcode : std::uint8_t {
  kAdd, kSub, kMul, kMulh, kMulhsu, kMulhu, kDiv, kDivu, kRem, kRemu,
  kAnd, kOr, kXor, kSll, kSrl, kSra, kSlt, kSltu,
  kAddi, kAndi, kOri, kXori, kSlti, kSltiu,
  kSlli, kSrli, kSrai,
  kLui, kAuipc,
  kLw, kLb, kLh, kLbu, kLhu,
  kSw, kSh, kSb,
  kBeq, kBne, kBlt, kBge, kBltu, kBgeu,
  kJal, kJalr,
  kHalt,
};

inline constexpr int kNumOpcodes = static_cast<int>(Opcode::kHalt) + 1;

enum class Format : std::uint8_t {
  kR,       // rd, rs1, rs2; imm is an unused field that must stay in I range
  kIAlu,    // rd, rs1, imm (signed 12-bit)
  kIShift,  // rd, rs1, imm (shift amount 0..31)
  kLoad,    // rd, imm(rs1)
  kJalr,    // rd, rs1, imm
  kS,       // rs2, imm(rs1)
  kB,       // rs1, rs2, offset (signed 13-bit, even)
  kU,       // rd, imm (20-bit)
  kJ,       // rd, offset (signed 21-bit, even)
  kSys,     // halt
};

struct Instruction {
  Opcode op = Opcode::kHalt;
  std::uint8_t rd = 0;
  std::uint8_t rs1 = 0;
  std::uint8_t rs2 = 0;
  std::int32_t imm = 0;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

std::string_view Mnemonic(Opcode op);
std::optional<Opcode> OpcodeFromMnemonic(std::string_view name);
Format FormatOf(Opcode op);
std::span<const Opcode> OpcodesOf(Format f);

bool HasRd(Format f);
bool HasRs1(Format f);
bool HasRs2(Format f);
bool HasImm(Format f);

struct ImmRange {
  std::int32_t min;
  std::int32_t max;
  std::int32_t align;
};
// Only meaningful when HasImm(f).
ImmRange ImmRangeOf(Format f);

// Register indices in range, unused register fields zero, immediate within
// its format's range. On failure returns the reason.
std::optional<std::string> WellFormednessError(const Instruction& instr);
inline bool IsWellFormed(const Instruction& instr) {
  return !WellFormednessError(instr).has_value();
}

std::string_view RegName(unsigned reg);
std::string Disassemble(const Instruction& instr);

bool IsLoad(Opcode op);
bool IsStore(Opcode op);
bool IsBranch(Opcode op);
// Instructions that compute rd from registers/immediates (R, I-ALU, I-shift,
// lui, auipc).
bool IsCompute(Opcode op);
// Width in bytes of a memory access.
unsigned AccessWidth(Opcode op);

// Result of a compute instruction.
Word ComputeResult(const Instruction& instr, Word rs1_val, Word rs2_val,
                   Word pc);
bool BranchTaken(Opcode op, Word rs1_val, Word rs2_val);
// Sign or zero extends a raw load of AccessWidth bytes.
Word ExtendLoad(Opcode op, Word raw);
// Truncates rs2 to the store width.
Word StoreValue(Opcode op, Word rs2_val);
Word MemAddress(Word rs1_val, std::int32_t imm);

// Architectural successor pc. Halt stays put.
Word NextPc(const Instruction& instr, Word rs1_val, Word rs2_val, Word pc);

}  // namespace zkfuzz::vm

#endif  // ZKFUZZ_ISA_H_
