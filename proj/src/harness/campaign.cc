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

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "zkfuzz/harness.h"
#include "zkfuzz/rewrite.h"

namespace zkfuzz::harness {

namespace {

constexpr std::size_t kBatchSize = 64;

struct RoundWork {
  std::vector<Word> inputs;
  std::optional<VmOutcome> normal;
  std::optional<inject::ScheduleDecision> decision;
  std::optional<VmOutcome> injected;
  bool adapter_error = false;
};

struct ProgramWork {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  std::vector<il::Circuit> circuits;
  Artifact artifact;
  bool build_failed = false;
  std::vector<RoundWork> rounds;
};

template <typename Fn>
void ParallelFor(std::size_t n, int jobs, Fn fn) {
  const std::size_t workers = std::min<std::size_t>(n, std::max(jobs, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

int UniformInt(Rng& rng, IntRange r) {
  return static_cast<int>(r.min + UniformIndex(rng, r.max - r.min + 1));
}

std::vector<il::Circuit> MakeCircuits(const CampaignConfig& config,
                                      std::uint64_t program_seed) {
  il::Circuit original =
      gen::GenerateCircuit(DeriveSeed(program_seed, 0), config.gen);
  Rng rng(DeriveSeed(program_seed, 1));
  const int k = UniformInt(rng, config.functions);
  std::vector<il::Circuit> circuits{original};
  for (int j = 1; j < k; ++j) {
    const int n = UniformInt(rng, config.transforms);
    circuits.push_back(rewrite::Transform(original, rewrite::Catalog(), n, rng,
                                          config.gen)
                           .circuit);
  }
  return circuits;
}

void PhaseBuildAndRun(const CampaignConfig& config, VmAdapter& adapter,
                      ProgramWork& work) {
  work.circuits = MakeCircuits(config, work.seed);
  codegen::ProductProgram product;
  try {
    product = codegen::MakeProduct(work.circuits);
    work.artifact = adapter.Build(product, codegen::EmitProductSource(product));
  } catch (const std::exception&) {
    work.build_failed = true;
    return;
  }
  work.rounds.resize(config.rounds);
  for (int r = 0; r < config.rounds; ++r) {
    RoundWork& round = work.rounds[r];
    Rng irng(DeriveSeed(work.seed, 100 + r));
    round.inputs =
        GenerateInputs(product.arity(), irng, config.input_pool_probability);
    try {
      round.normal = adapter.Run(work.artifact, round.inputs, std::nullopt);
    } catch (const std::exception&) {
      round.adapter_error = true;
    }
  }
}

bool Schedulable(const VmOutcome& normal) {
  return normal.exit_code == kExitOk &&
         normal.output == codegen::kSuccessWord && normal.trace &&
         !normal.trace->rows.empty();
}

bool WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  return static_cast<bool>(out);
}

class Campaign {
 public:
  Campaign(const CampaignConfig& config, VmAdapter& adapter,
           const CampaignHooks& hooks)
      : config_(config), adapter_(adapter), hooks_(hooks) {}

  CampaignResult Run() {
    config_.Validate();
    if (config_.persist) Prepare();
    for (std::uint64_t start = 0;
         start < static_cast<std::uint64_t>(config_.programs);
         start += kBatchSize) {
      const std::uint64_t end = std::min<std::uint64_t>(
          start + kBatchSize, static_cast<std::uint64_t>(config_.programs));
      RunBatch(start, end);
    }
    result_.stats.programs = static_cast<std::uint64_t>(config_.programs);
    result_.stats.instruction_coverage.assign(coverage_.begin(), coverage_.end());
    result_.stats.injection_counters = counters_.Snapshot();
    if (config_.persist) {
      if (!WriteFile(std::filesystem::path(config_.output_dir) / "stats.json",
                     StatsToJson(result_.stats).dump(2) + "\n")) {
        ++result_.stats.io_errors;
      }
    }
    return std::move(result_);
  }

 private:
  void Prepare() {
    std::error_code ec;
    std::filesystem::create_directories(
        std::filesystem::path(config_.output_dir) / "findings", ec);
    if (ec ||
        !WriteFile(std::filesystem::path(config_.output_dir) / "config.json",
                   ConfigToJson(config_).dump(2) + "\n")) {
      ++result_.stats.io_errors;
    }
  }

  void RunBatch(std::uint64_t start, std::uint64_t end) {
    std::vector<ProgramWork> batch(end - start);
    for (std::uint64_t i = start; i < end; ++i) {
      batch[i - start].index = i;
      batch[i - start].seed = DeriveSeed(config_.seed, i);
    }

    ParallelFor(batch.size(), config_.jobs, [&](std::size_t i) {
      PhaseBuildAndRun(config_, adapter_, batch[i]);
    });

    // Scheduling mutates the shared counters, so it runs in program order.
    if (config_.injection) {
      for (ProgramWork& work : batch) {
        for (std::size_t r = 0; r < work.rounds.size(); ++r) {
          RoundWork& round = work.rounds[r];
          if (!round.normal || !Schedulable(*round.normal)) continue;
          Rng srng(DeriveSeed(work.seed, 200 + r));
          round.decision = inject::Schedule(*round.normal->trace, counters_,
                                            config_.injection_types, srng);
          if (hooks_.on_schedule) {
            hooks_.on_schedule(work.index, static_cast<int>(r), *round.decision);
          }
        }
      }

      std::vector<std::pair<ProgramWork*, RoundWork*>> jobs;
      for (ProgramWork& work : batch) {
        for (RoundWork& round : work.rounds) {
          if (round.decision) jobs.emplace_back(&work, &round);
        }
      }
      ParallelFor(jobs.size(), config_.jobs, [&](std::size_t i) {
        auto [work, round] = jobs[i];
        try {
          round->injected =
              adapter_.Run(work->artifact, round->inputs, round->decision->plan);
        } catch (const std::exception&) {
          round->adapter_error = true;
        }
      });
    }

    for (ProgramWork& work : batch) Collect(work);
  }

  void Collect(ProgramWork& work) {
    CampaignStats& s = result_.stats;
    if (work.build_failed) {
      ++s.adapter_errors;
      return;
    }
    if (work.artifact.program) {
      for (const vm::Instruction& in : work.artifact.program->code) {
        coverage_.insert(std::string(vm::Mnemonic(in.op)));
      }
    }
    for (std::size_t r = 0; r < work.rounds.size(); ++r) {
      RoundWork& round = work.rounds[r];
      if (round.adapter_error) ++s.adapter_errors;
      if (!round.normal) continue;
      ++s.normal_runs;
      const VmOutcome* injected = round.injected ? &*round.injected : nullptr;
      if (injected) {
        ++s.injected_runs;
        ++s.injected_by_type[std::string(inject::Name(round.decision->plan.type))];
        s.matrix.Add(injected->output, injected->exit_code, codegen::kSuccessWord);
        if (injected->fault && !injected->fault->effective) {
          ++s.ineffective_injections;
        }
      }
      if (round.decision && !injected) continue;  // adapter error, counted
      const Verdict verdict = Classify(*round.normal, injected);
      ++s.verdicts[std::string(Name(verdict))];
      if (hooks_.on_round) {
        hooks_.on_round(work.index, static_cast<int>(r), verdict, *round.normal,
                        injected);
      }
      if (!IsFinding(verdict)) continue;
      const std::string mnemonic = round.decision ? round.decision->mnemonic : "";
      std::string sig = Signature(verdict, *round.normal, injected, mnemonic);
      if (!signatures_.insert(sig).second) {
        ++s.duplicate_findings;
        continue;
      }
      FindingReport report;
      report.verdict = verdict;
      report.signature = sig;
      report.campaign_seed = config_.seed;
      report.program_index = work.index;
      report.round = static_cast<int>(r);
      report.vm_id = adapter_.id();
      report.vm_version = adapter_.version();
      report.weaknesses = config_.weaknesses;
      report.step_budget = config_.step_budget;
      report.circuits = work.circuits;
      report.inputs = round.inputs;
      if (round.decision) report.plan = round.decision->plan;
      report.target_mnemonic = mnemonic;
      report.normal = *round.normal;
      report.injected = round.injected;
      ++s.findings;
      s.finding_signatures.push_back(sig);
      if (config_.persist) Persist(report);
      result_.findings.push_back(std::move(report));
    }
  }

  void Persist(FindingReport& report) {
    const std::string stem = fmt::format("finding-{}", result_.stats.findings);
    const auto dir = std::filesystem::path(config_.output_dir) / "findings";
    const VmOutcome& shown =
        report.verdict == Verdict::kSoundnessBug ? *report.injected : report.normal;
    if (shown.trace) {
      report.trace_file = stem + ".trace";
      if (!WriteFile(dir / report.trace_file, vm::DumpTrace(*shown.trace))) {
        ++result_.stats.io_errors;
      }
    }
    if (!WriteFile(dir / (stem + ".json"), ReportToJson(report).dump(2) + "\n")) {
      ++result_.stats.io_errors;
    }
  }

  const CampaignConfig& config_;
  VmAdapter& adapter_;
  const CampaignHooks& hooks_;
  inject::InjectionCounters counters_;
  std::set<std::string> signatures_;
  std::set<std::string> coverage_;
  CampaignResult result_;
};

}  // namespace

std::vector<il::Circuit> ProgramCircuits(const CampaignConfig& config,
                                         std::uint64_t index) {
  return MakeCircuits(config, DeriveSeed(config.seed, index));
}

CampaignResult RunCampaign(const CampaignConfig& config, VmAdapter& adapter,
                           const CampaignHooks& hooks) {
  return Campaign(config, adapter, hooks).Run();
}

CampaignResult RunCampaign(const CampaignConfig& config) {
  config.Validate();
  auto adapter = MakeAdapter(config);
  return RunCampaign(config, *adapter);
}

}  // namespace zkfuzz::harness
