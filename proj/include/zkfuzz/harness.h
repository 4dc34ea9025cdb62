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

// Campaign orchestration: circuit generation, metamorphic variants, product
// programs, normal and fault-injected runs, the bug oracle, finding
// persistence, replay and minimization.

#ifndef ZKFUZZ_HARNESS_H_
#define ZKFUZZ_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "zkfuzz/adapter.h"
#include "zkfuzz/circuit_gen.h"
#include "zkfuzz/codegen.h"
#include "zkfuzz/inject.h"
#include "zkfuzz/refvm.h"

namespace zkfuzz::harness {

using Json = nlohmann::json;

struct IntRange {
  int min = 0;
  int max = 0;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct CampaignConfig {
  std::uint64_t seed = 1;
  std::string vm = "refvm";
  // Command line of an external adapter when vm != "refvm".
  std::vector<std::string> adapter_command;
  int programs = 100;
  IntRange transforms{1, 4};
  IntRange functions{2, 10};
  int rounds = 3;
  bool injection = true;
  std::vector<inject::InjectionType> injection_types = {
      std::begin(inject::kAllInjectionTypes),
      std::end(inject::kAllInjectionTypes)};
  vm::WeaknessSet weaknesses;
  gen::GenConfig gen;
  double input_pool_probability = 0.3;
  std::uint64_t step_budget = vm::kDefaultStepBudget;
  int jobs = 1;
  std::string output_dir = "zkfuzz-out";
  // When false nothing is written to disk.
  bool persist = true;

  // Throws gen::ConfigError.
  void Validate() const;
  friend bool operator==(const CampaignConfig&, const CampaignConfig&) =
      default;
};

Json ConfigToJson(const CampaignConfig& config);
// Fields absent from `j` keep their value from `base`. Throws
// gen::ConfigError on unknown keys or bad values.
CampaignConfig ConfigFromJson(const Json& j, CampaignConfig base = {});

// Boundary pool used for program inputs.
std::vector<Word> InputBoundaryPool();
std::vector<Word> GenerateInputs(std::size_t arity, Rng& rng,
                                 double pool_probability);

enum class Verdict : std::uint8_t {
  kOk,
  kCompletenessBug,
  kMTDivergence,
  kSoundnessBug,
  kInconclusive,
};

inline constexpr Verdict kAllVerdicts[] = {
    Verdict::kOk, Verdict::kCompletenessBug, Verdict::kMTDivergence,
    Verdict::kSoundnessBug, Verdict::kInconclusive};

std::string_view Name(Verdict v);
std::optional<Verdict> VerdictFromName(std::string_view name);
// Soundness and completeness findings are the ones persisted.
bool IsFinding(Verdict v);

// The three-way oracle. Any output other than the success word counts as
// OOPS.
Verdict Classify(const VmOutcome& normal, const VmOutcome* injected,
                 Word success_word = codegen::kSuccessWord);

std::unique_ptr<VmAdapter> MakeAdapter(const CampaignConfig& config);

struct OutcomeMatrix {
  std::uint64_t success_exit0 = 0;
  std::uint64_t success_exit_nonzero = 0;
  std::uint64_t oops_exit0 = 0;
  std::uint64_t oops_exit_nonzero = 0;

  void Add(Word output, int exit_code, Word success_word);
  std::uint64_t total() const {
    return success_exit0 + success_exit_nonzero + oops_exit0 +
           oops_exit_nonzero;
  }
  friend bool operator==(const OutcomeMatrix&, const OutcomeMatrix&) = default;
};

struct CampaignStats {
  std::uint64_t programs = 0;
  std::uint64_t normal_runs = 0;
  std::uint64_t injected_runs = 0;
  std::uint64_t ineffective_injections = 0;
  std::map<std::string, std::uint64_t> verdicts;
  // Injected runs only.
  OutcomeMatrix matrix;
  std::map<std::string, std::uint64_t> injected_by_type;
  // Distinct mnemonics in compiled programs (static), when the adapter
  // exposes compiled code.
  std::vector<std::string> instruction_coverage;
  std::map<std::string, std::uint64_t> injection_counters;
  std::uint64_t findings = 0;
  std::uint64_t duplicate_findings = 0;
  std::vector<std::string> finding_signatures;
  std::uint64_t io_errors = 0;
  std::uint64_t adapter_errors = 0;

  friend bool operator==(const CampaignStats&, const CampaignStats&) = default;
};

Json StatsToJson(const CampaignStats& stats);
CampaignStats StatsFromJson(const Json& j);
std::string RenderStats(const CampaignStats& stats);

struct FindingReport {
  Verdict verdict = Verdict::kOk;
  std::string signature;
  std::uint64_t campaign_seed = 0;
  std::uint64_t program_index = 0;
  int round = 0;
  std::string vm_id;
  std::string vm_version;
  vm::WeaknessSet weaknesses;
  std::uint64_t step_budget = vm::kDefaultStepBudget;
  // Original circuit first, then the transformed variants.
  std::vector<il::Circuit> circuits;
  std::vector<Word> inputs;
  std::optional<inject::InjectionPlan> plan;
  std::string target_mnemonic;
  VmOutcome normal;
  std::optional<VmOutcome> injected;
  // File name of the trace dump next to the report, if written.
  std::string trace_file;
};

Json ReportToJson(const FindingReport& report);
// Throws std::runtime_error (including Json parse errors) on malformed input.
FindingReport ReportFromJson(const Json& j);
FindingReport LoadReport(const std::filesystem::path& path);

// Dedupe key: verdict, violated constraint (or bypassed weakness) and
// target mnemonic.
std::string Signature(Verdict verdict, const VmOutcome& normal,
                      const VmOutcome* injected,
                      const std::string& target_mnemonic);

// The circuits (original first) of program `index` of a campaign.
std::vector<il::Circuit> ProgramCircuits(const CampaignConfig& config,
                                         std::uint64_t index);

struct CampaignHooks {
  // Called for every scheduling decision, in deterministic order.
  std::function<void(std::uint64_t program, int round,
                     const inject::ScheduleDecision&)>
      on_schedule;
  // Called for every classified round.
  std::function<void(std::uint64_t program, int round, Verdict,
                     const VmOutcome& normal, const VmOutcome* injected)>
      on_round;
};

struct CampaignResult {
  CampaignStats stats;
  std::vector<FindingReport> findings;  // deduplicated, in discovery order
};

// Runs the campaign. Results are identical for any `jobs` value.
CampaignResult RunCampaign(const CampaignConfig& config, VmAdapter& adapter,
                           const CampaignHooks& hooks = {});
CampaignResult RunCampaign(const CampaignConfig& config);

struct ReplayResult {
  Verdict verdict = Verdict::kOk;
  VmOutcome normal;
  std::optional<VmOutcome> injected;
  std::vector<std::string> warnings;
};

ReplayResult Replay(const FindingReport& report, VmAdapter& adapter);

class MinimizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Greedy verdict-preserving reduction. Throws MinimizeError when the input
// does not reproduce.
FindingReport Minimize(const FindingReport& report, VmAdapter& adapter);

}  // namespace zkfuzz::harness

#endif  // ZKFUZZ_HARNESS_H_
