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

#include "zkfuzz/trace.h"

#include <charconv>
#include <sstream>

#include <fmt/format.h>

namespace zkfuzz::vm {

Word Memory::Load(Word addr, unsigned width) const {
  if (width == 4 && addr % 4 == 0) {
    auto it = words_.find(addr);
    return it == words_.end() ? 0 : it->second;
  }
  Word out = 0;
  for (unsigned i = 0; i < width; ++i) {
    Word a = addr + i;
    auto it = words_.find(a & ~Word{3});
    Word w = it == words_.end() ? 0 : it->second;
    out |= ((w >> (8 * (a & 3))) & 0xFF) << (8 * i);
  }
  return out;
}

void Memory::Store(Word addr, unsigned width, Word value) {
  if (width == 4 && addr % 4 == 0) {
    words_[addr] = value;
    return;
  }
  for (unsigned i = 0; i < width; ++i) {
    Word a = addr + i;
    Word& w = words_[a & ~Word{3}];
    unsigned shift = 8 * (a & 3);
    w = (w & ~(Word{0xFF} << shift)) | (((value >> (8 * i)) & 0xFF) << shift);
  }
}

namespace {

constexpr std::string_view kExitNames[] = {"clean", "fault",
                                           "budget_exceeded"};

std::uint64_t ParseHex(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw TraceFormatError(fmt::format("bad {} field '{}'", what, s));
  }
  return v;
}

std::vector<std::string_view> Split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find(sep, start);
    out.push_back(line.substr(start, end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace

std::string_view ExitStatusName(ExitStatus s) {
  return kExitNames[static_cast<int>(s)];
}

std::optional<ExitStatus> ExitStatusFromName(std::string_view name) {
  for (int i = 0; i < 3; ++i) {
    if (kExitNames[i] == name) return static_cast<ExitStatus>(i);
  }
  return std::nullopt;
}

std::string DumpTrace(const TraceRecord& t) {
  std::string out = fmt::format("# final_output=0x{:08x} exit={}",
                                t.final_output, ExitStatusName(t.exit));
  if (!t.fault.empty()) out += " fault=" + t.fault;
  out += '\n';
  auto opt = [](const std::optional<Word>& v) {
    return v ? fmt::format("{:x}", *v) : std::string("-");
  };
  for (const TraceRow& r : t.rows) {
    out += fmt::format(
        "{:x}\t{:x}\t{}\t{:x}\t{:x}\t{:x}\t{:x}\t{:x}\t{:x}\t{:x}\t{}\t{}\t{:x}"
        "\n",
        r.step, r.pc, Mnemonic(r.instr.op), r.instr.rd, r.instr.rs1,
        r.instr.rs2, static_cast<Word>(r.instr.imm), r.rs1_val, r.rs2_val,
        r.rd_val, opt(r.mem_addr), opt(r.mem_val), r.next_pc);
  }
  return out;
}

TraceRecord ParseTrace(std::string_view text) {
  TraceRecord t;
  bool header = false;
  for (std::string_view line : Split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (header) throw TraceFormatError("duplicate header");
      header = true;
      std::string_view rest = line.substr(1);
      std::size_t fault_pos = rest.find(" fault=");
      if (fault_pos != std::string_view::npos) {
        t.fault = std::string(rest.substr(fault_pos + 7));
        rest = rest.substr(0, fault_pos);
      }
      for (std::string_view kv : Split(rest, ' ')) {
        if (kv.empty()) continue;
        std::size_t eq = kv.find('=');
        if (eq == std::string_view::npos) {
          throw TraceFormatError("bad header item '" + std::string(kv) + "'");
        }
        std::string_view k = kv.substr(0, eq), v = kv.substr(eq + 1);
        if (k == "final_output") {
          if (v.substr(0, 2) == "0x") v.remove_prefix(2);
          t.final_output = static_cast<Word>(ParseHex(v, "final_output"));
        } else if (k == "exit") {
          auto s = ExitStatusFromName(v);
          if (!s) throw TraceFormatError("bad exit '" + std::string(v) + "'");
          t.exit = *s;
        } else {
          throw TraceFormatError("unknown header key '" + std::string(k) +
                                 "'");
        }
      }
      continue;
    }
    auto f = Split(line, '\t');
    if (f.size() != 13) {
      throw TraceFormatError(
          fmt::format("row has {} fields, expected 13", f.size()));
    }
    TraceRow r;
    r.step = ParseHex(f[0], "step");
    r.pc = static_cast<Word>(ParseHex(f[1], "pc"));
    auto op = OpcodeFromMnemonic(f[2]);
    if (!op) throw TraceFormatError("unknown mnemonic '" + std::string(f[2]) + "'");
    r.instr.op = *op;
    auto reg = [&](std::string_view s, std::string_view what) {
      std::uint64_t v = ParseHex(s, what);
      if (v > 31) throw TraceFormatError(fmt::format("bad {} '{}'", what, s));
      return static_cast<std::uint8_t>(v);
    };
    r.instr.rd = reg(f[3], "rd");
    r.instr.rs1 = reg(f[4], "rs1");
    r.instr.rs2 = reg(f[5], "rs2");
    r.instr.imm = static_cast<std::int32_t>(
        static_cast<Word>(ParseHex(f[6], "imm")));
    r.rs1_val = static_cast<Word>(ParseHex(f[7], "rs1_val"));
    r.rs2_val = static_cast<Word>(ParseHex(f[8], "rs2_val"));
    r.rd_val = static_cast<Word>(ParseHex(f[9], "rd_val"));
    if (f[10] != "-") r.mem_addr = static_cast<Word>(ParseHex(f[10], "mem_addr"));
    if (f[11] != "-") r.mem_val = static_cast<Word>(ParseHex(f[11], "mem_val"));
    r.next_pc = static_cast<Word>(ParseHex(f[12], "next_pc"));
    t.rows.push_back(r);
  }
  if (!header) throw TraceFormatError("missing header line");
  return t;
}

}  // namespace zkfuzz::vm
