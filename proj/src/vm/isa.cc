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

#include "zkfuzz/isa.h"

#include <array>

#include <fmt/format.h>

#include "zkfuzz/rv32.h"

namespace zkfuzz::vm {

namespace {

constexpr std::array<std::string_view, kNumOpcodes> kMnemonics = {
    "add",   "sub",  "mul",  "mulh", "mulhsu", "mulhu", "div",  "divu",
    "rem",   "remu", "and",  "or",   "xor",    "sll",   "srl",  "sra",
    "slt",   "sltu", "addi", "andi", "ori",    "xori",  "slti", "sltiu",
    "slli",  "srli", "srai", "lui",  "auipc",  "lw",    "lb",   "lh",
    "lbu",   "lhu",  "sw",   "sh",   "sb",     "beq",   "bne",  "blt",
    "bge",   "bltu", "bgeu", "jal",  "jalr",   "halt"};

constexpr Opcode kR[] = {
    Opcode::kAdd,  Opcode::kSub,  Opcode::kMul,    Opcode::kMulh,
    Opcode::kMulhsu, Opcode::kMulhu, Opcode::kDiv, Opcode::kDivu,
    Opcode::kRem,  Opcode::kRemu, Opcode::kAnd,    Opcode::kOr,
    Opcode::kXor,  Opcode::kSll,  Opcode::kSrl,    Opcode::kSra,
    Opcode::kSlt,  Opcode::kSltu};
constexpr Opcode kIAlu[] = {Opcode::kAddi, Opcode::kAndi, Opcode::kOri,
                            Opcode::kXori, Opcode::kSlti, Opcode::kSltiu};
constexpr Opcode kIShift[] = {Opcode::kSlli, Opcode::kSrli, Opcode::kSrai};
constexpr Opcode kLoad[] = {Opcode::kLw, Opcode::kLb, Opcode::kLh,
                            Opcode::kLbu, Opcode::kLhu};
constexpr Opcode kJalr[] = {Opcode::kJalr};
constexpr Opcode kS[] = {Opcode::kSw, Opcode::kSh, Opcode::kSb};
constexpr Opcode kB[] = {Opcode::kBeq, Opcode::kBne,  Opcode::kBlt,
                         Opcode::kBge, Opcode::kBltu, Opcode::kBgeu};
constexpr Opcode kU[] = {Opcode::kLui, Opcode::kAuipc};
constexpr Opcode kJ[] = {Opcode::kJal};
constexpr Opcode kSys[] = {Opcode::kHalt};

constexpr std::array<std::string_view, 32> kRegNames = {
    "zero", "ra", "sp", "gp", "tp",  "t0",  "t1", "t2", "s0", "s1", "a0",
    "a1",   "a2", "a3", "a4", "a5",  "a6",  "a7", "s2", "s3", "s4", "s5",
    "s6",   "s7", "s8", "s9", "s10", "s11", "t3", "t4", "t5", "t6"};

}  // namespace

std::string_view Mnemonic(Opcode op) {
  return kMnemonics[static_cast<int>(op)];
}

std::optional<Opcode> OpcodeFromMnemonic(std::string_view name) {
  for (int i = 0; i < kNumOpcodes; ++i) {
    if (kMnemonics[i] == name) return static_cast<Opcode>(i);
  }
  return std::nullopt;
}

Format FormatOf(Opcode op) {
  using O = Opcode;
  if (op <= O::kSltu) return Format::kR;
  if (op <= O::kSltiu) return Format::kIAlu;
  if (op <= O::kSrai) return Format::kIShift;
  if (op <= O::kAuipc) return Format::kU;
  if (op <= O::kLhu) return Format::kLoad;
  if (op <= O::kSb) return Format::kS;
  if (op <= O::kBgeu) return Format::kB;
  if (op == O::kJal) return Format::kJ;
  if (op == O::kJalr) return Format::kJalr;
  return Format::kSys;
}

std::span<const Opcode> OpcodesOf(Format f) {
  switch (f) {
    case Format::kR: return kR;
    case Format::kIAlu: return kIAlu;
    case Format::kIShift: return kIShift;
    case Format::kLoad: return kLoad;
    case Format::kJalr: return kJalr;
    case Format::kS: return kS;
    case Format::kB: return kB;
    case Format::kU: return kU;
    case Format::kJ: return kJ;
    case Format::kSys: return kSys;
  }
  return {};
}

bool HasRd(Format f) {
  return f != Format::kS && f != Format::kB && f != Format::kSys;
}
bool HasRs1(Format f) {
  return f != Format::kU && f != Format::kJ && f != Format::kSys;
}
bool HasRs2(Format f) {
  return f == Format::kR || f == Format::kS || f == Format::kB;
}
bool HasImm(Format f) { return f != Format::kSys; }

ImmRange ImmRangeOf(Format f) {
  switch (f) {
    case Format::kIShift:
      return {0, 31, 1};
    case Format::kB:
      return {-4096, 4094, 2};
    case Format::kU:
      return {0, 0xFFFFF, 1};
    case Format::kJ:
      return {-(1 << 20), (1 << 20) - 2, 2};
    case Format::kSys:
      return {0, 0, 1};
    default:
      return {-2048, 2047, 1};
  }
}

std::optional<std::string> WellFormednessError(const Instruction& in) {
  if (static_cast<int>(in.op) >= kNumOpcodes) return "invalid opcode";
  const Format f = FormatOf(in.op);
  if (in.rd > 31 || in.rs1 > 31 || in.rs2 > 31) {
    return "register index out of range";
  }
  if (!HasRd(f) && in.rd != 0) return "unused rd field is nonzero";
  if (!HasRs1(f) && in.rs1 != 0) return "unused rs1 field is nonzero";
  if (!HasRs2(f) && in.rs2 != 0) return "unused rs2 field is nonzero";
  ImmRange r = ImmRangeOf(f);
  if (in.imm < r.min || in.imm > r.max || in.imm % r.align != 0) {
    return fmt::format("immediate {} out of range for {}", in.imm,
                       Mnemonic(in.op));
  }
  return std::nullopt;
}

std::string_view RegName(unsigned reg) { return kRegNames.at(reg); }

std::string Disassemble(const Instruction& in) {
  const auto m = Mnemonic(in.op);
  const auto rd = RegName(in.rd);
  const auto rs1 = RegName(in.rs1);
  const auto rs2 = RegName(in.rs2);
  switch (FormatOf(in.op)) {
    case Format::kR:
      if (in.imm != 0) {
        return fmt::format("{} {}, {}, {}  [imm={}]", m, rd, rs1, rs2, in.imm);
      }
      return fmt::format("{} {}, {}, {}", m, rd, rs1, rs2);
    case Format::kIAlu:
    case Format::kIShift:
    case Format::kJalr:
      return fmt::format("{} {}, {}, {}", m, rd, rs1, in.imm);
    case Format::kLoad:
      return fmt::format("{} {}, {}({})", m, rd, in.imm, rs1);
    case Format::kS:
      return fmt::format("{} {}, {}({})", m, rs2, in.imm, rs1);
    case Format::kB:
      return fmt::format("{} {}, {}, {}", m, rs1, rs2, in.imm);
    case Format::kU:
      return fmt::format("{} {}, 0x{:X}", m, rd, in.imm);
    case Format::kJ:
      return fmt::format("{} {}, {}", m, rd, in.imm);
    case Format::kSys:
      return std::string(m);
  }
  return std::string(m);
}

bool IsLoad(Opcode op) { return FormatOf(op) == Format::kLoad; }
bool IsStore(Opcode op) { return FormatOf(op) == Format::kS; }
bool IsBranch(Opcode op) { return FormatOf(op) == Format::kB; }
bool IsCompute(Opcode op) {
  Format f = FormatOf(op);
  return f == Format::kR || f == Format::kIAlu || f == Format::kIShift ||
         f == Format::kU;
}

unsigned AccessWidth(Opcode op) {
  switch (op) {
    case Opcode::kLb:
    case Opcode::kLbu:
    case Opcode::kSb:
      return 1;
    case Opcode::kLh:
    case Opcode::kLhu:
    case Opcode::kSh:
      return 2;
    default:
      return 4;
  }
}

Word ComputeResult(const Instruction& in, Word a, Word b, Word pc) {
  const Word imm = static_cast<Word>(in.imm);
  switch (in.op) {
    case Opcode::kAdd: return a + b;
    case Opcode::kSub: return a - b;
    case Opcode::kMul: return a * b;
    case Opcode::kMulh: return rv32::Mulh(a, b);
    case Opcode::kMulhsu: return rv32::Mulhsu(a, b);
    case Opcode::kMulhu: return rv32::Mulhu(a, b);
    case Opcode::kDiv: return rv32::Div(a, b);
    case Opcode::kDivu: return rv32::Divu(a, b);
    case Opcode::kRem: return rv32::Rem(a, b);
    case Opcode::kRemu: return rv32::Remu(a, b);
    case Opcode::kAnd: return a & b;
    case Opcode::kOr: return a | b;
    case Opcode::kXor: return a ^ b;
    case Opcode::kSll: return rv32::Sll(a, b);
    case Opcode::kSrl: return rv32::Srl(a, b);
    case Opcode::kSra: return rv32::Sra(a, b);
    case Opcode::kSlt: return rv32::Slt(a, b);
    case Opcode::kSltu: return rv32::Sltu(a, b);
    case Opcode::kAddi: return a + imm;
    case Opcode::kAndi: return a & imm;
    case Opcode::kOri: return a | imm;
    case Opcode::kXori: return a ^ imm;
    case Opcode::kSlti: return rv32::Slt(a, imm);
    case Opcode::kSltiu: return rv32::Sltu(a, imm);
    case Opcode::kSlli: return rv32::Sll(a, imm);
    case Opcode::kSrli: return rv32::Srl(a, imm);
    case Opcode::kSrai: return rv32::Sra(a, imm);
    case Opcode::kLui: return imm << 12;
    case Opcode::kAuipc: return pc + (imm << 12);
    default: return 0;
  }
}

bool BranchTaken(Opcode op, Word a, Word b) {
  switch (op) {
    case Opcode::kBeq: return a == b;
    case Opcode::kBne: return a != b;
    case Opcode::kBlt: return rv32::AsSigned(a) < rv32::AsSigned(b);
    case Opcode::kBge: return rv32::AsSigned(a) >= rv32::AsSigned(b);
    case Opcode::kBltu: return a < b;
    case Opcode::kBgeu: return a >= b;
    default: return false;
  }
}

Word ExtendLoad(Opcode op, Word raw) {
  switch (op) {
    case Opcode::kLb:
      return static_cast<Word>(static_cast<std::int32_t>(
          static_cast<std::int8_t>(raw & 0xFF)));
    case Opcode::kLh:
      return static_cast<Word>(static_cast<std::int32_t>(
          static_cast<std::int16_t>(raw & 0xFFFF)));
    case Opcode::kLbu: return raw & 0xFF;
    case Opcode::kLhu: return raw & 0xFFFF;
    default: return raw;
  }
}

Word StoreValue(Opcode op, Word rs2_val) {
  switch (AccessWidth(op)) {
    case 1: return rs2_val & 0xFF;
    case 2: return rs2_val & 0xFFFF;
    default: return rs2_val;
  }
}

Word MemAddress(Word rs1_val, std::int32_t imm) {
  return rs1_val + static_cast<Word>(imm);
}

Word NextPc(const Instruction& in, Word a, Word b, Word pc) {
  const Word imm = static_cast<Word>(in.imm);
  switch (FormatOf(in.op)) {
    case Format::kB:
      return BranchTaken(in.op, a, b) ? pc + imm : pc + 4;
    case Format::kJ:
      return pc + imm;
    case Format::kJalr:
      return (a + imm) & ~Word{1};
    case Format::kSys:
      return pc;
    default:
      return pc + 4;
  }
}

}  // namespace zkfuzz::vm
