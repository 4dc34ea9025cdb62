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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "zkfuzz/harness.h"
#include "zkfuzz/rewrite.h"

namespace {

using namespace zkfuzz;
using harness::CampaignConfig;
namespace fs = std::filesystem;

constexpr int kExitClean = 0;
constexpr int kExitOther = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAdapter = 3;
constexpr int kExitFindings = 10;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CampaignFlags {
  std::string config_file;
  std::uint64_t seed = 0;
  std::string vm;
  std::string adapter;
  int programs = 0;
  int transforms_min = 0;
  int transforms_max = 0;
  int functions_min = 0;
  int functions_max = 0;
  int rounds = 0;
  std::string inject;
  std::vector<std::string> types;
  std::vector<std::string> weaknesses;
  std::string out;
  int jobs = 0;
  std::string asm_ext;
  std::uint64_t step_budget = 0;
  std::map<std::string, CLI::Option*> opts;
};

void AddCampaignFlags(CLI::App& app, CampaignFlags& f) {
  auto add = [&](const std::string& key, const std::string& flag, auto& var,
                 const std::string& help) {
    f.opts[key] = app.add_option(flag, var, help);
  };
  add("config", "--config", f.config_file,
      "JSON campaign config file; explicit flags override its values");
  add("seed", "--seed", f.seed, "campaign seed (default 1)");
  add("vm", "--vm", f.vm, "VM under test: refvm or a name for --adapter");
  add("adapter", "--adapter", f.adapter,
      "command line of an external VM adapter process");
  add("programs", "--programs", f.programs, "number of product programs (default 100)");
  add("transforms_min", "--transforms-min", f.transforms_min,
      "minimum rewrites per variant (default 1)");
  add("transforms_max", "--transforms-max", f.transforms_max,
      "maximum rewrites per variant (default 4)");
  add("functions_min", "--functions-min", f.functions_min,
      "minimum functions per product (default 2)");
  add("functions_max", "--functions-max", f.functions_max,
      "maximum functions per product (default 10)");
  add("rounds", "--rounds", f.rounds, "input rounds per program (default 3)");
  f.opts["inject"] = app.add_option("--inject", f.inject, "fault injection on|off (default on)")
                         ->check(CLI::IsMember({"on", "off"}));
  f.opts["types"] = app.add_option("--types", f.types,
                                   "comma-separated injection types (default all)")
                        ->delimiter(',');
  f.opts["weaknesses"] =
      app.add_option("--weaknesses", f.weaknesses,
                     "comma-separated refvm weaknesses, e.g. W_TRIREG,D_SHORT_TRACE")
          ->delimiter(',');
  add("out", "--out", f.out,
      "output directory (default zkfuzz-out; ZKFUZZ_OUT_DIR overrides the config file)");
  add("jobs", "--jobs", f.jobs, "worker threads (default 1)");
  f.opts["asm"] = app.add_option("--asm", f.asm_ext,
                                 "inline-assembly custom calls on|off (default off)")
                      ->check(CLI::IsMember({"on", "off"}));
  add("step_budget", "--step-budget", f.step_budget,
      "refvm step budget per run (default 1000000)");
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> SplitWords(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// "" and "none" denote the empty set.
vm::WeaknessSet WeaknessList(const std::vector<std::string>& names) {
  std::vector<std::string> kept;
  for (const std::string& n : names) {
    if (!n.empty() && n != "none") kept.push_back(n);
  }
  return vm::WeaknessSet::FromNames(kept);
}

CampaignConfig ResolveConfig(const CampaignFlags& f) {
  CampaignConfig c;
  auto given = [&](const char* key) { return f.opts.at(key)->count() > 0; };
  if (given("config")) {
    harness::Json j;
    try {
      j = harness::Json::parse(ReadFile(f.config_file));
    } catch (const harness::Json::exception& e) {
      throw UsageError(f.config_file + ": " + e.what());
    }
    c = harness::ConfigFromJson(j, c);
  }
  if (const char* env = std::getenv("ZKFUZZ_OUT_DIR"); env && *env) c.output_dir = env;
  if (given("seed")) c.seed = f.seed;
  if (given("vm")) c.vm = f.vm;
  if (given("adapter")) c.adapter_command = SplitWords(f.adapter);
  if (given("programs")) c.programs = f.programs;
  if (given("transforms_min")) c.transforms.min = f.transforms_min;
  if (given("transforms_max")) c.transforms.max = f.transforms_max;
  if (given("functions_min")) c.functions.min = f.functions_min;
  if (given("functions_max")) c.functions.max = f.functions_max;
  if (given("rounds")) c.rounds = f.rounds;
  if (given("inject")) c.injection = f.inject == "on";
  if (given("types")) {
    c.injection_types.clear();
    for (const std::string& name : f.types) {
      auto t = inject::InjectionTypeFromName(name);
      if (!t) throw UsageError("unknown injection type '" + name + "'");
      c.injection_types.push_back(*t);
    }
  }
  if (given("weaknesses")) c.weaknesses = WeaknessList(f.weaknesses);
  if (given("out")) c.output_dir = f.out;
  if (given("jobs")) c.jobs = f.jobs;
  if (given("asm")) c.gen.asm_extension = f.asm_ext == "on";
  if (given("step_budget")) c.step_budget = f.step_budget;
  c.Validate();
  return c;
}

int RunFuzz(const CampaignFlags& flags) {
  CampaignConfig config = ResolveConfig(flags);
  auto adapter = harness::MakeAdapter(config);
  harness::CampaignResult result = harness::RunCampaign(config, *adapter);
  fmt::print("campaign seed {} on {} {}", config.seed, adapter->id(), adapter->version());
  if (!config.weaknesses.empty()) {
    fmt::print(" (weaknesses {})", fmt::join(config.weaknesses.Names(), ","));
  }
  fmt::print("\n{}", harness::RenderStats(result.stats));
  if (config.persist) fmt::print("results written to {}\n", config.output_dir);
  return result.findings.empty() ? kExitClean : kExitFindings;
}

void PrintOutcome(const char* label, const harness::VmOutcome& o) {
  fmt::print("{:<9}output 0x{:08x} exit {}", label, o.output, o.exit_code);
  if (!o.constraint.empty()) fmt::print(" rejected by {} at row {}", o.constraint, o.constraint_row);
  fmt::print("\n");
  if (o.fault) {
    fmt::print("         fault {} at step {}{}: {}\n", inject::Name(o.fault->type),
               o.fault->step, o.fault->effective ? "" : " (no effect)",
               o.fault->description);
  }
  for (const std::string& b : o.bypasses) fmt::print("         weakened check {}\n", b);
}

int RunReplay(const std::string& file, const std::vector<std::string>& weakness_override,
              bool override_given, bool minimize, const std::string& minimized_out,
              const std::string& adapter_cmd) {
  harness::FindingReport report = harness::LoadReport(file);
  std::unique_ptr<harness::VmAdapter> adapter;
  if (!adapter_cmd.empty()) {
    adapter = std::make_unique<harness::ExternalProcessAdapter>(SplitWords(adapter_cmd));
  } else {
    vm::WeaknessSet ws = override_given ? WeaknessList(weakness_override)
                                        : report.weaknesses;
    adapter = std::make_unique<harness::RefVmAdapter>(ws, report.step_budget);
  }
  harness::ReplayResult r = harness::Replay(report, *adapter);
  for (const std::string& w : r.warnings) fmt::print(stderr, "warning: {}\n", w);
  fmt::print("stored verdict   {} ({})\n", harness::Name(report.verdict), report.signature);
  fmt::print("replayed verdict {}\n", harness::Name(r.verdict));
  PrintOutcome("normal", r.normal);
  if (r.injected) PrintOutcome("injected", *r.injected);
  if (!report.trace_file.empty()) {
    const fs::path trace_path = fs::path(file).parent_path() / report.trace_file;
    if (fs::exists(trace_path)) {
      vm::TraceRecord stored = vm::ParseTrace(ReadFile(trace_path));
      const harness::VmOutcome& shown = report.verdict == harness::Verdict::kSoundnessBug
                                            ? *r.injected
                                            : r.normal;
      const bool same = shown.trace && *shown.trace == stored;
      fmt::print("stored trace     {} ({} rows)\n", same ? "identical" : "differs",
                 stored.rows.size());
    }
  }
  if (r.verdict != report.verdict) return kExitOther;
  if (minimize) {
    harness::FindingReport small = harness::Minimize(report, *adapter);
    fmt::print("minimized to {} functions:\n", small.circuits.size());
    for (const il::Circuit& c : small.circuits) {
      fmt::print("  {}\n", il::RenderExpr(c.output_expr));
    }
    if (small.plan) {
      fmt::print("  injection {} at step {} payload {}\n", inject::Name(small.plan->type),
                 small.plan->target_step, small.plan->payload_seed);
    }
    if (!minimized_out.empty()) {
      std::ofstream out(minimized_out);
      out << harness::ReportToJson(small).dump(2) << "\n";
      if (!out) throw std::runtime_error("cannot write " + minimized_out);
    }
  }
  return kExitClean;
}

int RunEmit(const CampaignFlags& flags, std::uint64_t index, const std::string& finding,
            const std::vector<std::string>& circuit_files, const std::string& dir) {
  std::vector<il::Circuit> circuits;
  if (!finding.empty()) {
    circuits = harness::LoadReport(finding).circuits;
  } else if (!circuit_files.empty()) {
    for (const std::string& f : circuit_files) circuits.push_back(il::ParseCircuit(ReadFile(f)));
    il::ValidateCircuit(circuits.front());
    if (circuits.size() == 1) circuits.push_back(circuits.front());
  } else {
    circuits = harness::ProgramCircuits(ResolveConfig(flags), index);
  }
  codegen::ProductProgram product = codegen::MakeProduct(circuits);
  const std::string source = codegen::EmitProductSource(product);
  const std::string listing = vm::DisassembleProgram(codegen::CompileToRefVm(product));
  fs::create_directories(dir);
  std::ofstream(fs::path(dir) / "product.rs") << source;
  std::ofstream(fs::path(dir) / "product.asm") << listing;
  fmt::print("{}", source);
  fmt::print("wrote {} and {}\n", (fs::path(dir) / "product.rs").string(),
             (fs::path(dir) / "product.asm").string());
  return kExitClean;
}

int RunRules() {
  const auto& catalog = rewrite::Catalog();
  std::size_t w_id = 2, w_pat = 7;
  for (const auto& r : catalog) {
    w_id = std::max(w_id, r.id.size());
    w_pat = std::max(w_pat, r.pattern_text.size());
  }
  fmt::print("{:<{}}  {:<{}}  {}\n", "id", w_id, "pattern", w_pat, "template");
  for (const auto& r : catalog) {
    fmt::print("{:<{}}  {:<{}}  {}\n", r.id, w_id, r.pattern_text, w_pat, r.template_text);
  }
  fmt::print("{} rules\n", catalog.size());
  return kExitClean;
}

int RunStats(const std::string& path) {
  fs::path p = path;
  if (fs::is_directory(p)) p /= "stats.json";
  harness::Json j;
  try {
    j = harness::Json::parse(ReadFile(p));
  } catch (const harness::Json::exception& e) {
    throw std::runtime_error(p.string() + ": " + e.what());
  }
  fmt::print("{}", harness::RenderStats(harness::StatsFromJson(j)));
  return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zkfuzz: metamorphic and fault-injection fuzzer for zkVMs"};
  app.require_subcommand(1);

  CampaignFlags fuzz_flags;
  CLI::App* fuzz = app.add_subcommand("fuzz", "run a fuzzing campaign");
  AddCampaignFlags(*fuzz, fuzz_flags);

  std::string replay_file, replay_out, replay_adapter;
  std::vector<std::string> replay_weaknesses;
  bool replay_minimize = false;
  CLI::App* replay = app.add_subcommand("replay", "re-run a stored finding and print its verdict");
  replay->add_option("finding", replay_file, "finding-N.json file")->required();
  CLI::Option* replay_w =
      replay->add_option("--weaknesses", replay_weaknesses,
                         "override the recorded refvm weaknesses (comma-separated, none for the empty set)")
          ->delimiter(',');
  replay->add_option("--adapter", replay_adapter, "replay on an external VM adapter command");
  replay->add_flag("--minimize", replay_minimize, "shrink the finding while keeping its verdict");
  replay->add_option("--minimized-out", replay_out, "write the minimized finding to this file");

  CampaignFlags emit_flags;
  std::uint64_t emit_index = 0;
  std::string emit_finding, emit_dir = ".";
  std::vector<std::string> emit_circuits;
  CLI::App* emit = app.add_subcommand(
      "emit", "write a product program source and its refvm disassembly");
  AddCampaignFlags(*emit, emit_flags);
  emit->add_option("--index", emit_index, "program index within the campaign (default 0)");
  emit->add_option("--finding", emit_finding, "take the circuits from a finding file");
  emit->add_option("--circuit", emit_circuits, "circuit text file (repeatable)");
  emit->add_option("--dir", emit_dir, "directory for product.rs and product.asm (default .)");

  CLI::App* rules = app.add_subcommand("rules", "print the rewrite rule catalog");

  std::string stats_path;
  CLI::App* stats = app.add_subcommand("stats", "render a stored stats.json");
  stats->add_option("path", stats_path, "stats.json or a campaign output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (fuzz->parsed()) return RunFuzz(fuzz_flags);
    if (replay->parsed()) {
      return RunReplay(replay_file, replay_weaknesses, replay_w->count() > 0,
                       replay_minimize, replay_out, replay_adapter);
    }
    if (emit->parsed()) {
      return RunEmit(emit_flags, emit_index, emit_finding, emit_circuits, emit_dir);
    }
    if (rules->parsed()) return RunRules();
    if (stats->parsed()) return RunStats(stats_path);
  } catch (const UsageError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const gen::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitUsage;
  } catch (const harness::AdapterError& e) {
    fmt::print(stderr, "adapter error: {}\n", e.what());
    return kExitAdapter;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitOther;
  }
  return kExitUsage;
}
