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

#include <set>

#include <fmt/format.h>

#include "zkfuzz/harness.h"

namespace zkfuzz::harness {

namespace {

using gen::ConfigError;

template <typename T>
T Get(const Json& j, std::string_view key) {
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(fmt::format("bad value for '{}': {}", key, j.dump()));
  }
}

void CheckKeys(const Json& j, std::string_view where,
               std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(fmt::format("'{}' must be an object", where));
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (std::string_view a : allowed) ok = ok || a == key;
    if (!ok) throw ConfigError(fmt::format("unknown key '{}' in {}", key, where));
  }
}

Json RangeToJson(const IntRange& r) { return {{"min", r.min}, {"max", r.max}}; }

IntRange RangeFromJson(const Json& j, std::string_view key, IntRange base) {
  CheckKeys(j, key, {"min", "max"});
  if (j.contains("min")) base.min = Get<int>(j["min"], key);
  if (j.contains("max")) base.max = Get<int>(j["max"], key);
  return base;
}

Json GenToJson(const gen::GenConfig& g) {
  Json weights = Json::object();
  for (const auto& [v, w] : g.op_weights) weights[std::string(gen::VariantName(v))] = w;
  return {{"max_depth", g.max_depth},
          {"min_inputs", g.min_inputs},
          {"max_inputs", g.max_inputs},
          {"op_weights", weights},
          {"asm_extension", g.asm_extension},
          {"asm_weight", g.asm_weight},
          {"literal_pool", g.literal_pool},
          {"pool_probability", g.pool_probability},
          {"private_input_probability", g.private_input_probability}};
}

gen::GenConfig GenFromJson(const Json& j, gen::GenConfig g) {
  CheckKeys(j, "gen",
            {"max_depth", "min_inputs", "max_inputs", "op_weights",
             "asm_extension", "asm_weight", "literal_pool", "pool_probability",
             "private_input_probability"});
  if (j.contains("max_depth")) g.max_depth = Get<int>(j["max_depth"], "max_depth");
  if (j.contains("min_inputs")) g.min_inputs = Get<int>(j["min_inputs"], "min_inputs");
  if (j.contains("max_inputs")) g.max_inputs = Get<int>(j["max_inputs"], "max_inputs");
  if (j.contains("op_weights")) {
    if (!j["op_weights"].is_object()) throw ConfigError("op_weights must be an object");
    for (const auto& [name, w] : j["op_weights"].items()) {
      g.op_weights[gen::VariantFromName(name)] = Get<double>(w, name);
    }
  }
  if (j.contains("asm_extension")) g.asm_extension = Get<bool>(j["asm_extension"], "asm_extension");
  if (j.contains("asm_weight")) g.asm_weight = Get<double>(j["asm_weight"], "asm_weight");
  if (j.contains("literal_pool")) {
    g.literal_pool = Get<std::vector<Word>>(j["literal_pool"], "literal_pool");
  }
  if (j.contains("pool_probability")) {
    g.pool_probability = Get<double>(j["pool_probability"], "pool_probability");
  }
  if (j.contains("private_input_probability")) {
    g.private_input_probability =
        Get<double>(j["private_input_probability"], "private_input_probability");
  }
  return g;
}

}  // namespace

void CampaignConfig::Validate() const {
  if (programs < 0) throw ConfigError("programs must be >= 0");
  if (transforms.min < 1 || transforms.max < transforms.min) {
    throw ConfigError("transforms range must satisfy 1 <= min <= max");
  }
  if (functions.min < 2 || functions.max < functions.min) {
    throw ConfigError("functions range must satisfy 2 <= min <= max");
  }
  if (rounds < 1) throw ConfigError("rounds must be >= 1");
  if (injection && injection_types.empty()) {
    throw ConfigError("injection is on but no injection type is enabled");
  }
  if (!(input_pool_probability >= 0 && input_pool_probability <= 1)) {
    throw ConfigError("input_pool_probability must lie in [0, 1]");
  }
  if (step_budget < 1) throw ConfigError("step_budget must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (vm != vm::kRefVmId && adapter_command.empty()) {
    throw ConfigError("vm '" + vm + "' needs an adapter command");
  }
  gen.Validate();
}

Json ConfigToJson(const CampaignConfig& c) {
  std::vector<std::string> types;
  for (auto t : c.injection_types) types.emplace_back(inject::Name(t));
  return {{"seed", c.seed},
          {"vm", c.vm},
          {"adapter_command", c.adapter_command},
          {"programs", c.programs},
          {"transforms", RangeToJson(c.transforms)},
          {"functions", RangeToJson(c.functions)},
          {"rounds", c.rounds},
          {"injection", c.injection},
          {"injection_types", types},
          {"weaknesses", c.weaknesses.Names()},
          {"gen", GenToJson(c.gen)},
          {"input_pool_probability", c.input_pool_probability},
          {"step_budget", c.step_budget},
          {"jobs", c.jobs},
          {"output_dir", c.output_dir},
          {"persist", c.persist}};
}

CampaignConfig ConfigFromJson(const Json& j, CampaignConfig c) {
  CheckKeys(j, "config",
            {"seed", "vm", "adapter_command", "programs", "transforms",
             "functions", "rounds", "injection", "injection_types",
             "weaknesses", "gen", "input_pool_probability", "step_budget",
             "jobs", "output_dir", "persist"});
  if (j.contains("seed")) c.seed = Get<std::uint64_t>(j["seed"], "seed");
  if (j.contains("vm")) c.vm = Get<std::string>(j["vm"], "vm");
  if (j.contains("adapter_command")) {
    c.adapter_command =
        Get<std::vector<std::string>>(j["adapter_command"], "adapter_command");
  }
  if (j.contains("programs")) c.programs = Get<int>(j["programs"], "programs");
  if (j.contains("transforms")) {
    c.transforms = RangeFromJson(j["transforms"], "transforms", c.transforms);
  }
  if (j.contains("functions")) {
    c.functions = RangeFromJson(j["functions"], "functions", c.functions);
  }
  if (j.contains("rounds")) c.rounds = Get<int>(j["rounds"], "rounds");
  if (j.contains("injection")) c.injection = Get<bool>(j["injection"], "injection");
  if (j.contains("injection_types")) {
    c.injection_types.clear();
    for (const auto& name :
         Get<std::vector<std::string>>(j["injection_types"], "injection_types")) {
      auto t = inject::InjectionTypeFromName(name);
      if (!t) throw ConfigError("unknown injection type '" + name + "'");
      c.injection_types.push_back(*t);
    }
  }
  if (j.contains("weaknesses")) {
    auto names = Get<std::vector<std::string>>(j["weaknesses"], "weaknesses");
    try {
      c.weaknesses = vm::WeaknessSet::FromNames(names);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("gen")) c.gen = GenFromJson(j["gen"], c.gen);
  if (j.contains("input_pool_probability")) {
    c.input_pool_probability =
        Get<double>(j["input_pool_probability"], "input_pool_probability");
  }
  if (j.contains("step_budget")) {
    c.step_budget = Get<std::uint64_t>(j["step_budget"], "step_budget");
  }
  if (j.contains("jobs")) c.jobs = Get<int>(j["jobs"], "jobs");
  if (j.contains("output_dir")) c.output_dir = Get<std::string>(j["output_dir"], "output_dir");
  if (j.contains("persist")) c.persist = Get<bool>(j["persist"], "persist");
  return c;
}

std::vector<Word> InputBoundaryPool() {
  return {0, 1, 0xFFFFFFFF, 0x7FFFFFFF, 0x80000000, 2};
}

std::vector<Word> GenerateInputs(std::size_t arity, Rng& rng,
                                 double pool_probability) {
  static const std::vector<Word> pool = InputBoundaryPool();
  std::vector<Word> out;
  out.reserve(arity);
  for (std::size_t i = 0; i < arity; ++i) {
    out.push_back(Bernoulli(rng, pool_probability)
                      ? pool[UniformIndex(rng, pool.size())]
                      : UniformWord(rng));
  }
  return out;
}

namespace {
constexpr std::string_view kVerdictNames[] = {
    "Ok", "CompletenessBug", "MTDivergence", "SoundnessBug", "Inconclusive"};
}

std::string_view Name(Verdict v) { return kVerdictNames[static_cast<int>(v)]; }

std::optional<Verdict> VerdictFromName(std::string_view name) {
  for (int i = 0; i < 5; ++i) {
    if (kVerdictNames[i] == name) return static_cast<Verdict>(i);
  }
  return std::nullopt;
}

bool IsFinding(Verdict v) {
  return v == Verdict::kCompletenessBug || v == Verdict::kMTDivergence ||
         v == Verdict::kSoundnessBug;
}

Verdict Classify(const VmOutcome& normal, const VmOutcome* injected,
                 Word success_word) {
  if (normal.exit_code != kExitOk) return Verdict::kCompletenessBug;
  if (normal.output != success_word) return Verdict::kMTDivergence;
  if (!injected) return Verdict::kOk;
  if (injected->output != success_word && injected->exit_code == kExitOk) {
    return Verdict::kSoundnessBug;
  }
  return Verdict::kInconclusive;
}

std::unique_ptr<VmAdapter> MakeAdapter(const CampaignConfig& config) {
  if (config.vm == vm::kRefVmId) {
    return std::make_unique<RefVmAdapter>(config.weaknesses, config.step_budget);
  }
  return std::make_unique<ExternalProcessAdapter>(config.adapter_command);
}

void OutcomeMatrix::Add(Word output, int exit_code, Word success_word) {
  const bool ok = output == success_word;
  if (exit_code == kExitOk) {
    ++(ok ? success_exit0 : oops_exit0);
  } else {
    ++(ok ? success_exit_nonzero : oops_exit_nonzero);
  }
}

Json StatsToJson(const CampaignStats& s) {
  return {{"programs", s.programs},
          {"normal_runs", s.normal_runs},
          {"injected_runs", s.injected_runs},
          {"ineffective_injections", s.ineffective_injections},
          {"verdicts", s.verdicts},
          {"outcome_matrix",
           {{"SUCCESS_exit0", s.matrix.success_exit0},
            {"SUCCESS_exit_nonzero", s.matrix.success_exit_nonzero},
            {"OOPS_exit0", s.matrix.oops_exit0},
            {"OOPS_exit_nonzero", s.matrix.oops_exit_nonzero}}},
          {"injected_by_type", s.injected_by_type},
          {"instruction_coverage", s.instruction_coverage},
          {"injection_counters", s.injection_counters},
          {"findings", s.findings},
          {"duplicate_findings", s.duplicate_findings},
          {"finding_signatures", s.finding_signatures},
          {"io_errors", s.io_errors},
          {"adapter_errors", s.adapter_errors}};
}

CampaignStats StatsFromJson(const Json& j) {
  CampaignStats s;
  try {
    s.programs = j.at("programs");
    s.normal_runs = j.at("normal_runs");
    s.injected_runs = j.at("injected_runs");
    s.ineffective_injections = j.at("ineffective_injections");
    s.verdicts = j.at("verdicts").get<std::map<std::string, std::uint64_t>>();
    const Json& m = j.at("outcome_matrix");
    s.matrix.success_exit0 = m.at("SUCCESS_exit0");
    s.matrix.success_exit_nonzero = m.at("SUCCESS_exit_nonzero");
    s.matrix.oops_exit0 = m.at("OOPS_exit0");
    s.matrix.oops_exit_nonzero = m.at("OOPS_exit_nonzero");
    s.injected_by_type =
        j.at("injected_by_type").get<std::map<std::string, std::uint64_t>>();
    s.instruction_coverage =
        j.at("instruction_coverage").get<std::vector<std::string>>();
    s.injection_counters =
        j.at("injection_counters").get<std::map<std::string, std::uint64_t>>();
    s.findings = j.at("findings");
    s.duplicate_findings = j.at("duplicate_findings");
    s.finding_signatures =
        j.at("finding_signatures").get<std::vector<std::string>>();
    s.io_errors = j.at("io_errors");
    s.adapter_errors = j.at("adapter_errors");
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("malformed stats file: ") + e.what());
  }
  return s;
}

std::string RenderStats(const CampaignStats& s) {
  std::string out;
  out += fmt::format("programs tested      {}\n", s.programs);
  out += fmt::format("normal runs          {}\n", s.normal_runs);
  out += fmt::format("injected runs        {} ({} without effect)\n",
                     s.injected_runs, s.ineffective_injections);
  out += "verdicts\n";
  for (Verdict v : kAllVerdicts) {
    auto it = s.verdicts.find(std::string(Name(v)));
    out += fmt::format("  {:<18} {}\n", Name(v),
                       it == s.verdicts.end() ? 0 : it->second);
  }
  out += fmt::format("findings             {} unique, {} duplicates\n",
                     s.findings, s.duplicate_findings);
  for (const std::string& sig : s.finding_signatures) {
    out += "  " + sig + "\n";
  }
  out += "injected outcomes    exit = 0   exit != 0\n";
  out += fmt::format("  SUCCESS            {:<10} {}\n", s.matrix.success_exit0,
                     s.matrix.success_exit_nonzero);
  out += fmt::format("  OOPS               {:<10} {}\n", s.matrix.oops_exit0,
                     s.matrix.oops_exit_nonzero);
  out += fmt::format("instruction coverage {} mnemonics\n",
                     s.instruction_coverage.size());
  if (!s.instruction_coverage.empty()) {
    out += "  " + fmt::format("{}", fmt::join(s.instruction_coverage, " ")) + "\n";
  }
  if (s.adapter_errors || s.io_errors) {
    out += fmt::format("errors               {} adapter, {} i/o\n",
                       s.adapter_errors, s.io_errors);
  }
  return out;
}

}  // namespace zkfuzz::harness
