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

// RV32IM arithmetic on raw 32-bit words. Shared by the IL evaluator and the
// reference VM so both sides implement exactly one semantics.

#ifndef ZKFUZZ_RV32_H_
#define ZKFUZZ_RV32_H_

#include <cstdint>

namespace zkfuzz::rv32 {

using Word = std::uint32_t;
using SWord = std::int32_t;

constexpr SWord AsSigned(Word w) { return static_cast<SWord>(w); }

constexpr Word Divu(Word a, Word b) { return b == 0 ? 0xFFFFFFFFu : a / b; }
constexpr Word Remu(Word a, Word b) { return b == 0 ? a : a % b; }

constexpr Word Div(Word a, Word b) {
  if (b == 0) return 0xFFFFFFFFu;
  if (a == 0x80000000u && b == 0xFFFFFFFFu) return a;  // overflow
  return static_cast<Word>(AsSigned(a) / AsSigned(b));
}

constexpr Word Rem(Word a, Word b) {
  if (b == 0) return a;
  if (a == 0x80000000u && b == 0xFFFFFFFFu) return 0;
  return static_cast<Word>(AsSigned(a) % AsSigned(b));
}

constexpr Word Mulh(Word a, Word b) {
  std::int64_t p = static_cast<std::int64_t>(AsSigned(a)) *
                   static_cast<std::int64_t>(AsSigned(b));
  return static_cast<Word>(static_cast<std::uint64_t>(p) >> 32);
}

constexpr Word Mulhsu(Word a, Word b) {
  std::int64_t p = static_cast<std::int64_t>(AsSigned(a)) *
                   static_cast<std::int64_t>(static_cast<std::uint64_t>(b));
  return static_cast<Word>(static_cast<std::uint64_t>(p) >> 32);
}

constexpr Word Mulhu(Word a, Word b) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  return static_cast<Word>(p >> 32);
}

constexpr Word Sll(Word a, Word b) { return a << (b & 31); }
constexpr Word Srl(Word a, Word b) { return a >> (b & 31); }
constexpr Word Sra(Word a, Word b) {
  return static_cast<Word>(AsSigned(a) >> (b & 31));
}
constexpr Word Slt(Word a, Word b) { return AsSigned(a) < AsSigned(b); }
constexpr Word Sltu(Word a, Word b) { return a < b; }

}  // namespace zkfuzz::rv32

#endif  // ZKFUZZ_RV32_H_
