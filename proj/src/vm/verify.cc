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

#include <array>

#include <fmt/format.h>

#include "zkfuzz/refvm.h"

namespace zkfuzz::vm {

namespace {

constexpr Word kHighMask = 0xFFFFFF00;
constexpr std::size_t kMinRows = 256;
constexpr std::size_t kBlockRows = 16;

class Replayer {
 public:
  Replayer(const RefProgram& program, std::span<const Word> inputs,
           const WeaknessSet& weaknesses)
      : program_(program), weak_(weaknesses) {
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      memory_.Store(program.input_base + static_cast<Word>(4 * i), 4,
                    inputs[i]);
    }
  }

  VerifyResult Run(const TraceRecord& trace) {
    const auto& rows = trace.rows;
    if (weak_.Has(Weakness::kShortTrace) && rows.size() < kMinRows) {
      return Reject("LEN", 0,
                    fmt::format("trace has {} rows, minimum is {}",
                                rows.size(), kMinRows));
    }
    if (weak_.Has(Weakness::kCycleOffByOne) && !rows.empty()) {
      // Padding check against a cycle count that forgets one row.
      std::size_t counted = rows.size() - 1;
      std::size_t blocks = (counted + kBlockRows - 1) / kBlockRows;
      if (blocks * kBlockRows < rows.size()) {
        return Reject("LEN", rows.size() - 1,
                      fmt::format("{} rows do not fit {} padded blocks",
                                  rows.size(), blocks));
      }
    }
    if (rows.empty()) return Reject("C6", 0, "empty trace");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!CheckRow(rows, i)) return result_;
    }
    if (rows.back().instr.op != Opcode::kHalt) {
      return Reject("C6", rows.size() - 1, "trace does not end in halt");
    }
    if (trace.final_output != regs_[kOutputReg]) {
      return Reject("C6", rows.size() - 1,
                    fmt::format("final_output 0x{:x} but a0 is 0x{:x}",
                                trace.final_output, regs_[kOutputReg]));
    }
    result_.accepted = true;
    return result_;
  }

 private:
  VerifyResult Reject(std::string constraint, std::size_t row,
                      std::string detail) {
    result_.accepted = false;
    result_.constraint = std::move(constraint);
    result_.row = row;
    result_.detail = std::move(detail);
    return result_;
  }

  bool Fail(std::string constraint, std::size_t row, std::string detail) {
    Reject(std::move(constraint), row, std::move(detail));
    return false;
  }

  // Equality check that a weakness may weaken to the high 24 bits.
  bool Agree(Word got, Word want, bool low_byte_free, std::string_view c,
             std::size_t row) {
    if (got == want) return true;
    if (low_byte_free && (got & kHighMask) == (want & kHighMask)) {
      result_.bypasses.push_back({Weakness::kStoreLow, std::string(c), row});
      return true;
    }
    return false;
  }

  bool CheckRow(const std::vector<TraceRow>& rows, std::size_t i) {
    const TraceRow& r = rows[i];
    if (r.step != i) {
      return Fail("C4", i, fmt::format("step {} at row {}", r.step, i));
    }
    const Word expected_pc = i == 0 ? 0 : rows[i - 1].next_pc;
    if (r.pc != expected_pc) {
      return Fail("C4", i, fmt::format("pc 0x{:x}, expected 0x{:x}", r.pc,
                                       expected_pc));
    }
    if (r.pc % 4 != 0 || r.pc / 4 >= program_.code.size()) {
      return Fail("C1", i, fmt::format("pc 0x{:x} outside program", r.pc));
    }
    const Instruction& p = program_.code[r.pc / 4];
    const Format f = FormatOf(p.op);

    // C1
    if (r.instr.op != p.op || r.instr.rd != p.rd) {
      return Fail("C1", i, fmt::format("executed '{}', program has '{}'",
                                       Disassemble(r.instr), Disassemble(p)));
    }
    std::int32_t imm = p.imm;
    if (r.instr.imm != p.imm) {
      if (p.op == Opcode::kLui && weak_.Has(Weakness::kLuiImm)) {
        result_.bypasses.push_back({Weakness::kLuiImm, "C1", i});
        imm = r.instr.imm;
      } else {
        return Fail("C1", i, fmt::format("immediate {} but program has {}",
                                         r.instr.imm, p.imm));
      }
    }

    // C2
    const Word want1 = HasRs1(f) ? regs_[p.rs1] : 0;
    if (r.rs1_val != want1) {
      return Fail("C2", i, fmt::format("rs1_val 0x{:x}, register holds 0x{:x}",
                                       r.rs1_val, want1));
    }
    const Word want2 = HasRs2(f) ? regs_[p.rs2] : 0;
    if (r.rs2_val != want2) {
      if (f == Format::kR && weak_.Has(Weakness::kTriReg)) {
        result_.bypasses.push_back({Weakness::kTriReg, "C2", i});
      } else if (!Agree(r.rs2_val, want2,
                        IsStore(p.op) && weak_.Has(Weakness::kStoreLow), "C2",
                        i)) {
        return Fail("C2", i,
                    fmt::format("rs2_val 0x{:x}, register holds 0x{:x}",
                                r.rs2_val, want2));
      }
    }

    Instruction e = p;
    e.imm = imm;
    Word rd_value = 0;
    const bool has_mem = IsLoad(p.op) || IsStore(p.op);
    if (!has_mem && (r.mem_addr || r.mem_val)) {
      return Fail("C3", i, "memory effect on a non-memory instruction");
    }
    if (IsCompute(p.op)) {
      rd_value = ComputeResult(e, r.rs1_val, r.rs2_val, r.pc);
    } else if (has_mem) {
      const Word addr = MemAddress(r.rs1_val, e.imm);
      const unsigned width = AccessWidth(p.op);
      if (!r.mem_addr || *r.mem_addr != addr || !r.mem_val) {
        return Fail("C3", i, fmt::format("memory address must be 0x{:x}", addr));
      }
      const bool low_free = weak_.Has(Weakness::kStoreLow);
      if (IsLoad(p.op)) {
        Word stored = memory_.Load(addr, width);
        if (!Agree(*r.mem_val, stored, low_free, "C5", i)) {
          return Fail("C5", i, fmt::format("load of 0x{:x} saw 0x{:x}, memory "
                                           "holds 0x{:x}",
                                           addr, *r.mem_val, stored));
        }
        rd_value = ExtendLoad(p.op, *r.mem_val);
      } else {
        if (addr + width > program_.input_base && addr < program_.input_end()) {
          return Fail("C5", i, fmt::format("store into input region at 0x{:x}",
                                           addr));
        }
        Word want = StoreValue(p.op, r.rs2_val);
        if (*r.mem_val != StoreValue(p.op, *r.mem_val) ||
            !Agree(*r.mem_val, want, low_free, "C5", i)) {
          return Fail("C5", i, fmt::format("stored 0x{:x}, rs2 gives 0x{:x}",
                                           *r.mem_val, want));
        }
        memory_.Store(addr, width, *r.mem_val);
      }
    } else if (p.op == Opcode::kJal || p.op == Opcode::kJalr) {
      rd_value = r.pc + 4;
    }
    const Word want_rd = HasRd(f) && p.rd != 0 ? rd_value : 0;
    if (r.rd_val != want_rd) {
      return Fail("C3", i, fmt::format("rd_val 0x{:x}, expected 0x{:x}",
                                       r.rd_val, want_rd));
    }

    // C4
    const Word next = NextPc(e, r.rs1_val, r.rs2_val, r.pc);
    if (r.next_pc != next) {
      return Fail("C4", i, fmt::format("next_pc 0x{:x}, expected 0x{:x}",
                                       r.next_pc, next));
    }
    if (p.op == Opcode::kHalt && i + 1 != rows.size()) {
      return Fail("C6", i, "rows after halt");
    }
    if (HasRd(f) && p.rd != 0) regs_[p.rd] = r.rd_val;
    return true;
  }

  const RefProgram& program_;
  const WeaknessSet& weak_;
  std::array<Word, 32> regs_{};
  Memory memory_;
  VerifyResult result_;
};

}  // namespace

VerifyResult Verify(const RefProgram& program, std::span<const Word> inputs,
                    const TraceRecord& trace, const WeaknessSet& weaknesses) {
  return Replayer(program, inputs, weaknesses).Run(trace);
}

}  // namespace zkfuzz::vm
