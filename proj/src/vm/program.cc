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

constexpr std::array<std::string_view, 5> kWeaknessNames = {
    "W_TRIREG", "W_STORE_LOW", "W_LUI_IMM", "D_SHORT_TRACE",
    "D_CYCLE_OFF_BY_ONE"};

}  // namespace

std::string_view Name(Weakness w) {
  return kWeaknessNames[static_cast<int>(w)];
}

std::optional<Weakness> WeaknessFromName(std::string_view name) {
  for (std::size_t i = 0; i < kWeaknessNames.size(); ++i) {
    if (kWeaknessNames[i] == name) return static_cast<Weakness>(i);
  }
  return std::nullopt;
}

bool IsSoundnessWeakness(Weakness w) {
  return w == Weakness::kTriReg || w == Weakness::kStoreLow ||
         w == Weakness::kLuiImm;
}

std::vector<std::string> WeaknessSet::Names() const {
  std::vector<std::string> out;
  for (Weakness w : kAllWeaknesses) {
    if (Has(w)) out.emplace_back(Name(w));
  }
  return out;
}

WeaknessSet WeaknessSet::FromNames(std::span<const std::string> names) {
  WeaknessSet s;
  for (const std::string& n : names) {
    auto w = WeaknessFromName(n);
    if (!w) throw std::invalid_argument("unknown weakness '" + n + "'");
    s.Set(*w);
  }
  return s;
}

std::optional<std::string> ValidateProgram(const RefProgram& p) {
  if (p.code.empty()) return "empty program";
  const auto n = static_cast<std::int64_t>(p.code.size());
  for (std::int64_t i = 0; i < n; ++i) {
    const Instruction& in = p.code[i];
    if (auto err = WellFormednessError(in)) {
      return fmt::format("instruction {}: {}", i, *err);
    }
    if (in.op == Opcode::kHalt && i != n - 1) {
      return fmt::format("halt at {} is not the last instruction", i);
    }
    Format f = FormatOf(in.op);
    if (f == Format::kB || f == Format::kJ) {
      if (in.imm % 4 != 0) return fmt::format("misaligned target at {}", i);
      std::int64_t target = i + in.imm / 4;
      if (target < 0 || target >= n) {
        return fmt::format("target of instruction {} out of range", i);
      }
    }
  }
  if (p.code.back().op != Opcode::kHalt) return "program does not end in halt";
  return std::nullopt;
}

std::string DisassembleProgram(const RefProgram& p) {
  std::string out = fmt::format("; inputs at 0x{:x}, {} words\n", p.input_base,
                                p.input_count);
  std::size_t next_label = 0;
  for (std::size_t i = 0; i < p.code.size(); ++i) {
    while (next_label < p.labels.size() && p.labels[next_label].first == i) {
      out += p.labels[next_label].second + ":\n";
      ++next_label;
    }
    out += fmt::format("  {:04x}:  {}\n", 4 * i, Disassemble(p.code[i]));
  }
  return out;
}

}  // namespace zkfuzz::vm
