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

#include <unistd.h>

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "zkfuzz/harness.h"

namespace zkfuzz::harness {
namespace {

namespace fs = std::filesystem;
using vm::Weakness;

fs::path TempDir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  fs::path p = fs::temp_directory_path() /
               fmt::format("zkfuzz-{}-{}-{}", getpid(), info->test_suite_name(), info->name());
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

VmOutcome Outcome(Word output, int exit_code) {
  VmOutcome o;
  o.output = output;
  o.exit_code = exit_code;
  return o;
}

CampaignConfig Quick(int programs, vm::WeaknessSet weaknesses = {}) {
  CampaignConfig c;
  c.programs = programs;
  c.weaknesses = weaknesses;
  c.persist = false;
  return c;
}

const VmOutcome kSuccess = Outcome(codegen::kSuccessWord, kExitOk);

TEST(Classify, Table) {
  const VmOutcome oops_ok = Outcome(0, kExitOk);
  const VmOutcome oops_rejected = Outcome(0, kExitRejected);
  EXPECT_EQ(Classify(Outcome(0, kExitFault), nullptr), Verdict::kCompletenessBug);
  EXPECT_EQ(Classify(Outcome(codegen::kSuccessWord, kExitRejected), nullptr),
            Verdict::kCompletenessBug);
  EXPECT_EQ(Classify(kSuccess, &oops_ok), Verdict::kSoundnessBug);
  EXPECT_EQ(Classify(kSuccess, &oops_rejected), Verdict::kInconclusive);
  EXPECT_EQ(Classify(kSuccess, &kSuccess), Verdict::kInconclusive);
  EXPECT_EQ(Classify(oops_ok, nullptr), Verdict::kMTDivergence);
  EXPECT_EQ(Classify(oops_ok, &oops_ok), Verdict::kMTDivergence);
  EXPECT_EQ(Classify(kSuccess, nullptr), Verdict::kOk);
  // Any word other than SUCCESS is OOPS.
  const VmOutcome garbage = Outcome(0x1234, kExitOk);
  EXPECT_EQ(Classify(kSuccess, &garbage), Verdict::kSoundnessBug);
}

TEST(Classify, Names) {
  for (Verdict v : kAllVerdicts) EXPECT_EQ(VerdictFromName(Name(v)), v);
  EXPECT_TRUE(IsFinding(Verdict::kSoundnessBug));
  EXPECT_FALSE(IsFinding(Verdict::kInconclusive));
  EXPECT_FALSE(IsFinding(Verdict::kOk));
}

TEST(Signature, Format) {
  VmOutcome inj = Outcome(0, kExitOk);
  inj.bypasses = {"W_TRIREG/C2@17", "W_TRIREG/C2@40"};
  EXPECT_EQ(Signature(Verdict::kSoundnessBug, kSuccess, &inj, "remu"),
            "SoundnessBug|W_TRIREG/C2|remu");
  VmOutcome rejected = Outcome(0, kExitRejected);
  rejected.constraint = "LEN";
  EXPECT_EQ(Signature(Verdict::kCompletenessBug, rejected, nullptr, ""),
            "CompletenessBug|LEN|-");
  EXPECT_EQ(Signature(Verdict::kCompletenessBug, Outcome(0, kExitFault), nullptr, ""),
            "CompletenessBug|exit2|-");
}

TEST(Matrix, Cells) {
  OutcomeMatrix m;
  m.Add(codegen::kSuccessWord, 0, codegen::kSuccessWord);
  m.Add(codegen::kSuccessWord, 1, codegen::kSuccessWord);
  m.Add(0, 0, codegen::kSuccessWord);
  m.Add(7, 2, codegen::kSuccessWord);
  m.Add(0, 3, codegen::kSuccessWord);
  EXPECT_EQ(m.success_exit0, 1u);
  EXPECT_EQ(m.success_exit_nonzero, 1u);
  EXPECT_EQ(m.oops_exit0, 1u);
  EXPECT_EQ(m.oops_exit_nonzero, 2u);
  EXPECT_EQ(m.total(), 5u);
}

TEST(Inputs, BoundaryPool) {
  Rng r1(1), r2(1);
  EXPECT_EQ(GenerateInputs(5, r1, 0.3), GenerateInputs(5, r2, 0.3));
  EXPECT_TRUE(GenerateInputs(0, r1, 0.3).empty());
  std::set<Word> seen;
  Rng rng(2);
  for (int i = 0; i < 10000; ++i) seen.insert(GenerateInputs(1, rng, 0.3)[0]);
  for (Word w : InputBoundaryPool()) EXPECT_TRUE(seen.contains(w)) << w;
  EXPECT_GT(seen.size(), 6000u);  // the rest is uniform
}

TEST(Config, JsonRoundTrip) {
  CampaignConfig c;
  c.seed = 0xFFFFFFFFFFFFFFFFull;
  c.programs = 7;
  c.transforms = {2, 3};
  c.functions = {3, 5};
  c.injection_types = {inject::InjectionType::kBrNegCond, inject::InjectionType::kLoadValMod};
  c.weaknesses = {Weakness::kTriReg, Weakness::kShortTrace};
  c.gen.asm_extension = true;
  c.gen.op_weights[gen::Variant::kIte] = 0.25;
  c.gen.literal_pool = {5, 6};
  c.output_dir = "elsewhere";
  c.jobs = 3;
  const Json j = ConfigToJson(c);
  EXPECT_EQ(ConfigFromJson(j), c);
  EXPECT_EQ(ConfigFromJson(Json::parse(j.dump())), c);
  EXPECT_EQ(ConfigToJson(ConfigFromJson(j)).dump(), j.dump());
}

TEST(Config, PartialFileKeepsBase) {
  CampaignConfig base;
  base.programs = 42;
  CampaignConfig c = ConfigFromJson(Json::parse(R"({"seed": 9, "gen": {"max_depth": 3}})"), base);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.programs, 42);
  EXPECT_EQ(c.gen.max_depth, 3);
  EXPECT_EQ(c.gen.max_inputs, base.gen.max_inputs);
}

TEST(Config, Errors) {
  EXPECT_THROW(ConfigFromJson(Json::parse(R"({"sede": 1})")), gen::ConfigError);
  EXPECT_THROW(ConfigFromJson(Json::parse(R"({"gen": {"depth": 1}})")), gen::ConfigError);
  EXPECT_THROW(ConfigFromJson(Json::parse(R"({"programs": "many"})")), gen::ConfigError);
  EXPECT_THROW(ConfigFromJson(Json::parse(R"({"weaknesses": ["W_NOPE"]})")), gen::ConfigError);
  EXPECT_THROW(ConfigFromJson(Json::parse(R"({"injection_types": ["BIT_FLIP"]})")),
               gen::ConfigError);
  CampaignConfig c;
  c.functions = {1, 3};
  EXPECT_THROW(c.Validate(), gen::ConfigError);
  c = {};
  c.transforms = {3, 2};
  EXPECT_THROW(c.Validate(), gen::ConfigError);
  c = {};
  c.vm = "sp1";
  EXPECT_THROW(c.Validate(), gen::ConfigError);
  c = {};
  c.injection_types.clear();
  EXPECT_THROW(c.Validate(), gen::ConfigError);
}

TEST(Stats, JsonRoundTrip) {
  CampaignResult r = RunCampaign(Quick(20, {Weakness::kTriReg}));
  EXPECT_EQ(StatsFromJson(StatsToJson(r.stats)), r.stats);
  const std::string text = RenderStats(r.stats);
  EXPECT_NE(text.find("SoundnessBug"), std::string::npos);
  EXPECT_NE(text.find("instruction coverage"), std::string::npos);
}

TEST(Campaign, NoFalsePositivesWithoutWeaknesses) {
  CampaignConfig c = Quick(200);
  c.jobs = 4;
  CampaignResult r = RunCampaign(c);
  EXPECT_EQ(r.stats.programs, 200u);
  EXPECT_EQ(r.stats.normal_runs, 600u);
  EXPECT_EQ(r.stats.injected_runs, 600u);
  EXPECT_TRUE(r.findings.empty());
  EXPECT_EQ(r.stats.verdicts["SoundnessBug"], 0u);
  EXPECT_EQ(r.stats.verdicts["CompletenessBug"], 0u);
  EXPECT_EQ(r.stats.verdicts["MTDivergence"], 0u);
  EXPECT_EQ(r.stats.matrix.oops_exit0, 0u);
  EXPECT_EQ(r.stats.matrix.total(), 600u);
  EXPECT_EQ(r.stats.adapter_errors, 0u);
}

TEST(Campaign, InjectionOffRunsNormalOnly) {
  CampaignConfig c = Quick(10);
  c.injection = false;
  CampaignResult r = RunCampaign(c);
  EXPECT_EQ(r.stats.injected_runs, 0u);
  EXPECT_EQ(r.stats.verdicts["Ok"], 30u);
}

TEST(Campaign, TriRegFindingsAreGenuine) {
  RefVmAdapter adapter({Weakness::kTriReg});
  CampaignResult r = RunCampaign(Quick(300, {Weakness::kTriReg}), adapter);
  ASSERT_FALSE(r.findings.empty());
  bool three_register = false;
  for (const FindingReport& f : r.findings) {
    ASSERT_EQ(f.verdict, Verdict::kSoundnessBug);
    auto op = vm::OpcodeFromMnemonic(f.target_mnemonic);
    ASSERT_TRUE(op);
    three_register |= vm::FormatOf(*op) == vm::Format::kR;
    // Oracle soundness: OOPS and verifier acceptance at the same time.
    ReplayResult replay = Replay(f, adapter);
    EXPECT_EQ(replay.verdict, Verdict::kSoundnessBug);
    EXPECT_NE(replay.injected->output, codegen::kSuccessWord);
    EXPECT_EQ(replay.injected->exit_code, kExitOk);
    EXPECT_TRUE(*replay.injected->verified);
  }
  EXPECT_TRUE(three_register);
}

TEST(Campaign, ShortTraceYieldsCompletenessBugs) {
  CampaignConfig c = Quick(30, {Weakness::kShortTrace});
  c.gen.max_depth = 3;
  c.functions = {2, 2};
  CampaignResult r = RunCampaign(c);
  ASSERT_EQ(r.findings.size(), 1u);
  EXPECT_EQ(r.findings[0].verdict, Verdict::kCompletenessBug);
  EXPECT_EQ(r.findings[0].signature, "CompletenessBug|LEN|-");
  EXPECT_EQ(r.stats.verdicts["CompletenessBug"], 90u);
  EXPECT_EQ(r.stats.duplicate_findings, 89u);
}

TEST(Campaign, SchedulerHookSeesArgminChoices) {
  CampaignConfig c = Quick(40);
  int calls = 0;
  CampaignHooks hooks;
  hooks.on_schedule = [&](std::uint64_t, int, const inject::ScheduleDecision& d) {
    ++calls;
    std::uint64_t min = UINT64_MAX;
    for (const auto& [m, n] : d.counts_before) min = std::min(min, n);
    EXPECT_EQ(d.counts_before.at(d.mnemonic), min);
  };
  RefVmAdapter adapter;
  CampaignResult r = RunCampaign(c, adapter, hooks);
  EXPECT_EQ(calls, 120);
  std::uint64_t total = 0;
  for (const auto& [m, n] : r.stats.injection_counters) total += n;
  EXPECT_EQ(total, 120u);
}

TEST(Campaign, ResultsIndependentOfJobs) {
  CampaignConfig c = Quick(150, {Weakness::kTriReg, Weakness::kStoreLow,
                                 Weakness::kCycleOffByOne});
  c.jobs = 1;
  CampaignResult one = RunCampaign(c);
  c.jobs = 6;
  CampaignResult six = RunCampaign(c);
  EXPECT_EQ(one.stats, six.stats);
  ASSERT_EQ(one.findings.size(), six.findings.size());
  for (std::size_t i = 0; i < one.findings.size(); ++i) {
    EXPECT_EQ(ReportToJson(one.findings[i]), ReportToJson(six.findings[i]));
  }
}

TEST(Campaign, PersistedFilesAreReproducible) {
  const fs::path dir = TempDir();
  CampaignConfig c = Quick(300, {Weakness::kTriReg, Weakness::kStoreLow});
  c.persist = true;
  c.output_dir = (dir / "a").string();
  CampaignResult ra = RunCampaign(c);
  c.output_dir = (dir / "b").string();
  c.jobs = 3;
  RunCampaign(c);
  ASSERT_GE(ra.findings.size(), 2u);
  for (const auto& entry : fs::recursive_directory_iterator(dir / "a")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), dir / "a");
    if (rel == "config.json") continue;  // records jobs and output_dir
    EXPECT_EQ(Slurp(entry.path()), Slurp(dir / "b" / rel)) << rel;
  }
  // Reports load back and point at a parseable trace.
  for (std::size_t i = 0; i < ra.findings.size(); ++i) {
    const fs::path file = dir / "a" / "findings" / fmt::format("finding-{}.json", i + 1);
    FindingReport loaded = LoadReport(file);
    EXPECT_EQ(ReportToJson(loaded), ReportToJson(ra.findings[i]));
    vm::TraceRecord t = vm::ParseTrace(Slurp(dir / "a" / "findings" / loaded.trace_file));
    EXPECT_FALSE(t.rows.empty());
  }
  EXPECT_EQ(StatsFromJson(Json::parse(Slurp(dir / "a" / "stats.json"))), ra.stats);
}

TEST(Report, CorruptedFilesAreRejected) {
  const fs::path dir = TempDir();
  std::ofstream(dir / "bad.json") << "{\"verdict\": \"SoundnessBug\",";
  EXPECT_THROW(LoadReport(dir / "bad.json"), std::runtime_error);
  std::ofstream(dir / "partial.json") << "{\"verdict\": \"SoundnessBug\"}";
  EXPECT_THROW(LoadReport(dir / "partial.json"), std::runtime_error);
  EXPECT_THROW(LoadReport(dir / "missing.json"), std::runtime_error);
}

TEST(Replay, WeaknessFixConfirmation) {
  RefVmAdapter weak({Weakness::kTriReg});
  CampaignResult r = RunCampaign(Quick(400, {Weakness::kTriReg}), weak);
  ASSERT_FALSE(r.findings.empty());
  const FindingReport& f = r.findings.front();
  EXPECT_EQ(Replay(f, weak).verdict, Verdict::kSoundnessBug);
  EXPECT_TRUE(Replay(f, weak).warnings.empty());
  RefVmAdapter fixed;
  ReplayResult rr = Replay(f, fixed);
  EXPECT_EQ(rr.verdict, Verdict::kInconclusive);
  EXPECT_EQ(rr.injected->exit_code, kExitRejected);
  EXPECT_FALSE(rr.warnings.empty());
}

TEST(Minimize, ShrinksToTwoFunctions) {
  CampaignConfig c = Quick(300, {Weakness::kTriReg});
  c.functions = {10, 10};
  RefVmAdapter adapter({Weakness::kTriReg});
  CampaignResult r = RunCampaign(c, adapter);
  ASSERT_FALSE(r.findings.empty());
  const FindingReport& f = r.findings.front();
  ASSERT_EQ(f.circuits.size(), 10u);
  FindingReport small = Minimize(f, adapter);
  EXPECT_EQ(small.circuits.size(), 2u);
  EXPECT_EQ(small.verdict, Verdict::kSoundnessBug);
  EXPECT_EQ(small.target_mnemonic, f.target_mnemonic);
  std::size_t before = 0, after = 0;
  for (const auto& c1 : f.circuits) before += c1.output_expr.NodeCount();
  for (const auto& c2 : small.circuits) after += c2.output_expr.NodeCount();
  EXPECT_LT(after, before);
  EXPECT_EQ(Replay(small, adapter).verdict, Verdict::kSoundnessBug);
  // A minimal finding is a fixpoint.
  FindingReport again = Minimize(small, adapter);
  EXPECT_EQ(ReportToJson(again), ReportToJson(small));
}

TEST(Minimize, NonReproducingFindingIsAnError) {
  RefVmAdapter weak({Weakness::kTriReg});
  CampaignResult r = RunCampaign(Quick(400, {Weakness::kTriReg}), weak);
  ASSERT_FALSE(r.findings.empty());
  RefVmAdapter fixed;
  EXPECT_THROW(Minimize(r.findings.front(), fixed), MinimizeError);
}

TEST(Minimize, CompletenessFinding) {
  CampaignConfig c = Quick(5, {Weakness::kShortTrace});
  c.functions = {6, 6};
  RefVmAdapter adapter({Weakness::kShortTrace});
  CampaignResult r = RunCampaign(c, adapter);
  ASSERT_EQ(r.findings.size(), 1u);
  FindingReport small = Minimize(r.findings[0], adapter);
  EXPECT_EQ(small.circuits.size(), 2u);
  for (const auto& circ : small.circuits) {
    EXPECT_EQ(circ.output_expr.kind(), il::ExprKind::kIntLit);
  }
}

std::vector<std::string> FakeCommand(std::vector<std::string> extra) {
  std::vector<std::string> argv = {ZKFUZZ_FAKE_ADAPTER};
  argv.insert(argv.end(), extra.begin(), extra.end());
  return argv;
}

TEST(External, CampaignThroughSubprocess) {
  const fs::path dir = TempDir();
  ExternalProcessAdapter ext(FakeCommand({"--weaknesses", "W_TRIREG", "--trace-dir", dir.string()}));
  EXPECT_EQ(ext.id(), "fakevm");
  EXPECT_EQ(ext.version(), "0.1");
  CampaignConfig c = Quick(400, {Weakness::kTriReg});
  c.vm = "fakevm";
  c.adapter_command = {"unused"};
  c.jobs = 4;
  CampaignResult er = RunCampaign(c, ext);
  RefVmAdapter ref({Weakness::kTriReg});
  CampaignResult rr = RunCampaign(Quick(400, {Weakness::kTriReg}), ref);
  // Same VM behind both adapters: same verdict counts and outcome matrix.
  EXPECT_EQ(er.stats.verdicts, rr.stats.verdicts);
  EXPECT_EQ(er.stats.matrix, rr.stats.matrix);
  EXPECT_EQ(er.stats.injection_counters, rr.stats.injection_counters);
  EXPECT_GT(er.stats.verdicts["SoundnessBug"], 0u);
  EXPECT_EQ(er.stats.adapter_errors, 0u);
  for (const FindingReport& f : er.findings) {
    EXPECT_EQ(f.vm_id, "fakevm");
    EXPECT_EQ(Replay(f, ext).verdict, Verdict::kSoundnessBug);
  }
}

TEST(External, FailuresSurfaceAsAdapterErrors) {
  EXPECT_THROW(ExternalProcessAdapter({"/nonexistent/adapter"}), AdapterError);
  ExternalProcessAdapter failing(FakeCommand({"--fail-build"}));
  CampaignConfig c = Quick(3);
  CampaignResult r = RunCampaign(c, failing);
  EXPECT_EQ(r.stats.adapter_errors, 3u);
  EXPECT_EQ(r.stats.normal_runs, 0u);
  ExternalProcessAdapter dying(FakeCommand({"--die-on-run"}));
  auto product = codegen::MakeProduct(ProgramCircuits(c, 0));
  Artifact art = dying.Build(product, codegen::EmitProductSource(product));
  EXPECT_THROW(dying.Run(art, std::vector<Word>(product.arity(), 1), std::nullopt),
               AdapterError);
}

}  // namespace
}  // namespace zkfuzz::harness
