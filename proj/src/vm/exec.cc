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

using inject::InjectionType;

class Executor {
 public:
  Executor(const RefProgram& program, std::span<const Word> inputs,
           const ExecOptions& options)
      : program_(program),
        options_(options),
        payload_(options.plan ? options.plan->payload_seed : 0) {
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      memory_.Store(program.input_base + static_cast<Word>(4 * i), 4,
                    inputs[i]);
    }
  }

  ExecResult Run() {
    ExecResult result;
    TraceRecord& t = result.trace;
    Word pc = 0;
    for (std::uint64_t step = 0;; ++step) {
      if (step >= options_.step_budget) {
        t.exit = ExitStatus::kBudgetExceeded;
        break;
      }
      const bool armed = options_.plan && !fired_ &&
                         step == options_.plan->target_step;
      if (armed) {
        fired_ = true;
        fault_ = AppliedFault{options_.plan->type, step, false, ""};
        pc = PreExec(pc);
      }
      if (pc % 4 != 0 || pc / 4 >= program_.code.size()) {
        Fail(t, fmt::format("pc 0x{:x} outside program", pc));
        break;
      }
      TraceRow row;
      row.step = step;
      row.pc = pc;
      row.instr = program_.code[pc / 4];
      if (armed && Is(InjectionType::kInstrWordMod)) {
        auto m = inject::MutateInstruction(row.instr, payload_);
        Effective(fmt::format("{} -> {} ({})", Disassemble(row.instr),
                              Disassemble(m.instr), inject::Name(m.field)));
        row.instr = m.instr;
      }
      if (!Step(row, armed, t)) break;
      if (armed) PostExec(row);
      t.rows.push_back(row);
      if (row.instr.op == Opcode::kHalt) break;
      pc = row.next_pc;
    }
    t.final_output = regs_[kOutputReg];
    result.fault = fault_;
    return result;
  }

 private:
  bool Is(InjectionType type) const { return options_.plan->type == type; }
  bool lenient() const { return options_.plan.has_value(); }

  void Effective(std::string description) {
    fault_->effective = true;
    fault_->description = std::move(description);
  }

  static void Fail(TraceRecord& t, std::string why) {
    t.exit = ExitStatus::kFault;
    t.fault = std::move(why);
  }

  Word OtherPc(Word avoid) {
    const std::size_t n = program_.code.size();
    if (n < 2) return avoid;
    bool valid = avoid % 4 == 0 && avoid / 4 < n;
    std::size_t i = UniformIndex(payload_, valid ? n - 1 : n);
    if (valid && i >= avoid / 4) ++i;
    return static_cast<Word>(4 * i);
  }

  Word OtherWord(Word avoid) {
    Word v = UniformWord(payload_);
    while (v == avoid) v = UniformWord(payload_);
    return v;
  }

  void ModifyRegister() {
    auto r = 1 + UniformIndex(payload_, 31);
    Word old = regs_[r];
    regs_[r] = OtherWord(old);
    Effective(fmt::format("{}: 0x{:x} -> 0x{:x}", RegName(r), old, regs_[r]));
  }

  void ModifyMemory() {
    const auto& words = memory_.words();
    if (words.empty()) return;
    auto it = words.begin();
    std::advance(it, UniformIndex(payload_, words.size()));
    Word addr = it->first;
    Word old = it->second;
    Word v = OtherWord(old);
    memory_.Store(addr, 4, v);
    Effective(fmt::format("mem[0x{:x}]: 0x{:x} -> 0x{:x}", addr, old, v));
  }

  Word PreExec(Word pc) {
    switch (options_.plan->type) {
      case InjectionType::kPreExecPcMod: {
        Word to = OtherPc(pc);
        if (to != pc) Effective(fmt::format("pc 0x{:x} -> 0x{:x}", pc, to));
        return to;
      }
      case InjectionType::kPreExecRegMod:
        ModifyRegister();
        break;
      case InjectionType::kPreExecMemMod:
        ModifyMemory();
        break;
      default:
        break;
    }
    return pc;
  }

  void PostExec(TraceRow& row) {
    switch (options_.plan->type) {
      case InjectionType::kPostExecPcMod: {
        Word to = OtherPc(row.next_pc);
        if (to != row.next_pc) {
          Effective(fmt::format("next_pc 0x{:x} -> 0x{:x}", row.next_pc, to));
          row.next_pc = to;
        }
        break;
      }
      case InjectionType::kPostExecRegMod:
        ModifyRegister();
        break;
      case InjectionType::kPostExecMemMod:
        ModifyMemory();
        break;
      default:
        break;
    }
  }

  Word LowByteMask() { return 1 + static_cast<Word>(UniformIndex(payload_, 255)); }

  // Executes one instruction into `row`. Returns false on a fault.
  bool Step(TraceRow& row, bool armed, TraceRecord& t) {
    const Instruction& in = row.instr;
    const Format f = FormatOf(in.op);
    const Word pc = row.pc;
    row.rs1_val = HasRs1(f) ? regs_[in.rs1] : 0;
    row.rs2_val = HasRs2(f) ? regs_[in.rs2] : 0;
    Word rd_value = 0;
    row.next_pc = NextPc(in, row.rs1_val, row.rs2_val, pc);
    if (IsCompute(in.op)) {
      rd_value = ComputeResult(in, row.rs1_val, row.rs2_val, pc);
      if (armed && Is(InjectionType::kCompOutMod)) {
        Word v = OtherWord(rd_value);
        Effective(fmt::format("result 0x{:x} -> 0x{:x}", rd_value, v));
        rd_value = v;
      }
    } else if (IsLoad(in.op) || IsStore(in.op)) {
      const Word addr = MemAddress(row.rs1_val, in.imm);
      const unsigned width = AccessWidth(in.op);
      if (addr % width != 0 && !lenient()) {
        Fail(t, fmt::format("misaligned {}-byte access at 0x{:x}", width, addr));
        return false;
      }
      row.mem_addr = addr;
      if (IsLoad(in.op)) {
        Word raw = memory_.Load(addr, width);
        if (armed && Is(InjectionType::kLoadValMod)) {
          Word v = raw ^ LowByteMask();
          Effective(fmt::format("loaded 0x{:x} -> 0x{:x}", raw, v));
          raw = v;
        }
        row.mem_val = raw;
        rd_value = ExtendLoad(in.op, raw);
      } else {
        if (addr + width > program_.input_base && addr < program_.input_end()) {
          Fail(t, fmt::format("store to read-only input region at 0x{:x}", addr));
          return false;
        }
        Word v = StoreValue(in.op, row.rs2_val);
        if (armed && Is(InjectionType::kStoreOutMod)) {
          Word m = v ^ LowByteMask();
          Effective(fmt::format("stored 0x{:x} -> 0x{:x}", v, m));
          v = m;
        }
        row.mem_val = v;
        memory_.Store(addr, width, v);
      }
    } else if (IsBranch(in.op)) {
      if (armed && Is(InjectionType::kBrNegCond)) {
        bool taken = BranchTaken(in.op, row.rs1_val, row.rs2_val);
        row.next_pc = taken ? pc + 4 : pc + static_cast<Word>(in.imm);
        Effective(taken ? "taken branch falls through" : "branch forced taken");
      }
    } else if (in.op == Opcode::kJal || in.op == Opcode::kJalr) {
      rd_value = pc + 4;
    }
    if (HasRd(f) && in.rd != 0) {
      regs_[in.rd] = rd_value;
      row.rd_val = rd_value;
    }
    return true;
  }

  const RefProgram& program_;
  const ExecOptions& options_;
  Rng payload_;
  std::array<Word, 32> regs_{};
  Memory memory_;
  bool fired_ = false;
  std::optional<AppliedFault> fault_;
};

}  // namespace

ExecResult Execute(const RefProgram& program, std::span<const Word> inputs,
                   const ExecOptions& options) {
  return Executor(program, inputs, options).Run();
}

}  // namespace zkfuzz::vm
