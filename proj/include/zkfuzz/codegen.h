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

// Two backends for circuits: Rust source text for external zkVM toolchains,
// and direct compilation of the merged product program to reference-VM
// code.

#ifndef ZKFUZZ_CODEGEN_H_
#define ZKFUZZ_CODEGEN_H_

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zkfuzz/il.h"
#include "zkfuzz/refvm.h"

namespace zkfuzz::codegen {

using il::Word;

inline constexpr Word kSuccessWord = 0xC0FFEE;
inline constexpr Word kOopsWord = 0x0;

struct SourceFunction {
  std::string name;
  std::size_t arity = 0;
  std::string text;
};

// Div and rem are emitted with explicit zero guards that reproduce the IL
// semantics; custom calls become inline-assembly macros.
SourceFunction EmitFunction(const il::Circuit& circuit, std::string_view name);

class ProductError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ProductProgram {
  std::vector<il::Circuit> circuits;
  std::vector<std::string> names;  // c1, c2, ...
  std::vector<il::Input> inputs;
  Word success_word = kSuccessWord;
  Word oops_word = kOopsWord;

  std::size_t arity() const { return inputs.size(); }
};

// Throws ProductError when fewer than two circuits are given or their input
// lists differ.
ProductProgram MakeProduct(std::vector<il::Circuit> circuits);

// success_word iff every member circuit evaluates to the same word.
Word ProductSemantics(const ProductProgram& product,
                      std::span<const Word> inputs);

struct SourceOptions {
  std::string entry_annotation = "#[zkvm::entry(main)]";
  // Lines placed at the top of the entry point, where an adapter binds the
  // inputs for its VM.
  std::string prologue = "// inputs are bound by the VM adapter";
};

std::string EmitProductSource(const ProductProgram& product,
                              const SourceOptions& options = {});

// Straightforward -O0 style compilation: inputs are copied into a stack
// frame and every variable use reloads from it; expressions use a virtual
// register stack that spills to the frame.
vm::RefProgram CompileToRefVm(const ProductProgram& product);

}  // namespace zkfuzz::codegen

#endif  // ZKFUZZ_CODEGEN_H_
