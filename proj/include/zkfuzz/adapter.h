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

// The boundary between the fuzzer and a VM under test. The bundled
// reference VM is one adapter; external zkVMs are driven through a
// line-delimited JSON protocol over a subprocess's stdin/stdout:
//
//   -> {"cmd":"hello"}
//   <- {"status":"ok","id":"myvm","version":"0.3"}
//   -> {"cmd":"build","source":"...","circuits":["...",...],"arity":3}
//   <- {"status":"ok","artifact":"a1"}
//   -> {"cmd":"run","artifact":"a1","inputs":[7,3,2],
//       "plan":null | {"type":"INSTR_WORD_MOD","target_step":12,
//                      "payload_seed":99}}
//   <- {"status":"ok","output":12648430,"exit_code":0,
//       "trace_path":"/tmp/t.trace" | null}
//
// Any other status is an adapter failure and carries an "error" string.
// Exit code 0 means the run completed and its proof verified.

#ifndef ZKFUZZ_ADAPTER_H_
#define ZKFUZZ_ADAPTER_H_

#include <cstdio>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "zkfuzz/codegen.h"
#include "zkfuzz/inject.h"
#include "zkfuzz/refvm.h"

namespace zkfuzz::harness {

using il::Word;

// Exit codes shared by all adapters.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;
inline constexpr int kExitFault = 2;
inline constexpr int kExitBudget = 3;

class AdapterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Artifact {
  std::string handle;
  // Set by the reference adapter; opaque handles only for external VMs.
  std::shared_ptr<const vm::RefProgram> program;
};

struct VmOutcome {
  Word output = 0;
  int exit_code = kExitOk;
  std::optional<vm::TraceRecord> trace;
  // Explicit verifier decision, when the adapter exposes it.
  std::optional<bool> verified;
  std::string constraint;
  std::size_t constraint_row = 0;
  std::string detail;
  // "W_TRIREG/C2@17" style records of weakened checks that mattered.
  std::vector<std::string> bypasses;
  std::optional<vm::AppliedFault> fault;
};

class VmAdapter {
 public:
  virtual ~VmAdapter() = default;
  virtual std::string id() const = 0;
  virtual std::string version() const = 0;
  // Must be safe to call concurrently.
  virtual Artifact Build(const codegen::ProductProgram& product,
                         const std::string& source) = 0;
  virtual VmOutcome Run(const Artifact& artifact, std::span<const Word> inputs,
                        const std::optional<inject::InjectionPlan>& plan) = 0;
};

class RefVmAdapter : public VmAdapter {
 public:
  explicit RefVmAdapter(vm::WeaknessSet weaknesses = {},
                        std::uint64_t step_budget = vm::kDefaultStepBudget)
      : weaknesses_(weaknesses), step_budget_(step_budget) {}

  std::string id() const override { return std::string(vm::kRefVmId); }
  std::string version() const override {
    return std::string(vm::kRefVmVersion);
  }
  Artifact Build(const codegen::ProductProgram& product,
                 const std::string& source) override;
  VmOutcome Run(const Artifact& artifact, std::span<const Word> inputs,
                const std::optional<inject::InjectionPlan>& plan) override;

  const vm::WeaknessSet& weaknesses() const { return weaknesses_; }

 private:
  vm::WeaknessSet weaknesses_;
  std::uint64_t step_budget_;
};

// Drives an external VM through the subprocess protocol. Requests are
// serialized over the single pipe pair.
class ExternalProcessAdapter : public VmAdapter {
 public:
  explicit ExternalProcessAdapter(std::vector<std::string> argv);
  ~ExternalProcessAdapter() override;

  std::string id() const override { return id_; }
  std::string version() const override { return version_; }
  Artifact Build(const codegen::ProductProgram& product,
                 const std::string& source) override;
  VmOutcome Run(const Artifact& artifact, std::span<const Word> inputs,
                const std::optional<inject::InjectionPlan>& plan) override;

 private:
  struct Process;
  std::unique_ptr<Process> process_;
  std::string id_ = "external";
  std::string version_ = "unknown";
};

}  // namespace zkfuzz::harness

#endif  // ZKFUZZ_ADAPTER_H_
