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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "zkfuzz/harness.h"

namespace zkfuzz {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun Cli(const std::string& args) {
  const std::string cmd = fmt::format("{} {} 2>&1", ZKFUZZ_CLI, args);
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path TempDir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  fs::path p = fs::temp_directory_path() /
               fmt::format("zkfuzz-cli-{}-{}", getpid(), info->name());
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Cli, CleanCampaignExitsZero) {
  const fs::path dir = TempDir();
  CliRun r = Cli(fmt::format("fuzz --seed 3 --programs 30 --weaknesses none --out {}", dir.string()));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir / "stats.json"));
  EXPECT_TRUE(fs::exists(dir / "config.json"));
  auto stats = harness::StatsFromJson(harness::Json::parse(Slurp(dir / "stats.json")));
  EXPECT_EQ(stats.programs, 30u);
  EXPECT_EQ(stats.findings, 0u);
}

TEST(Cli, FindingsExitTenAndReplay) {
  const fs::path dir = TempDir();
  CliRun r = Cli(fmt::format("fuzz --seed 1 --programs 400 --weaknesses W_TRIREG --jobs 2 --out {}",
                          dir.string()));
  ASSERT_EQ(r.code, 10) << r.out;
  const fs::path finding = dir / "findings" / "finding-1.json";
  ASSERT_TRUE(fs::exists(finding));

  CliRun replay = Cli("replay " + finding.string());
  EXPECT_EQ(replay.code, 0) << replay.out;
  EXPECT_NE(replay.out.find("replayed verdict SoundnessBug"), std::string::npos) << replay.out;
  EXPECT_NE(replay.out.find("stored trace     identical"), std::string::npos) << replay.out;

  // With the weakness removed the verifier rejects, so the verdict changes.
  CliRun fixed = Cli(fmt::format("replay {} --weaknesses none", finding.string()));
  EXPECT_EQ(fixed.code, 1) << fixed.out;
  EXPECT_NE(fixed.out.find("replayed verdict Inconclusive"), std::string::npos);

  const fs::path small = dir / "small.json";
  CliRun minimized = Cli(fmt::format("replay {} --minimize --minimized-out {}", finding.string(),
                                  small.string()));
  EXPECT_EQ(minimized.code, 0) << minimized.out;
  EXPECT_EQ(harness::LoadReport(small).circuits.size(), 2u);

  CliRun stats = Cli("stats " + dir.string());
  EXPECT_EQ(stats.code, 0);
  EXPECT_NE(stats.out.find("SoundnessBug"), std::string::npos);

  CliRun emit = Cli(fmt::format("emit --finding {} --dir {}", small.string(), (dir / "e").string()));
  EXPECT_EQ(emit.code, 0) << emit.out;
  EXPECT_TRUE(fs::exists(dir / "e" / "product.rs"));
  EXPECT_NE(Slurp(dir / "e" / "product.asm").find("halt"), std::string::npos);
}

TEST(Cli, SameSeedSameFiles) {
  const fs::path dir = TempDir();
  const std::string args = "fuzz --seed 9 --programs 150 --weaknesses W_STORE_LOW,D_CYCLE_OFF_BY_ONE";
  Cli(fmt::format("{} --jobs 1 --out {}", args, (dir / "a").string()));
  Cli(fmt::format("{} --jobs 4 --out {}", args, (dir / "b").string()));
  EXPECT_EQ(Slurp(dir / "a" / "stats.json"), Slurp(dir / "b" / "stats.json"));
  EXPECT_EQ(Slurp(dir / "a" / "findings" / "finding-1.json"),
            Slurp(dir / "b" / "findings" / "finding-1.json"));
}

TEST(Cli, ConfigFileAndOverrides) {
  const fs::path dir = TempDir();
  std::ofstream(dir / "cfg.json") << R"({"seed": 4, "programs": 12, "output_dir": "ignored"})";
  CliRun r = Cli(fmt::format("fuzz --config {} --programs 5 --out {}", (dir / "cfg.json").string(),
                          (dir / "o").string()));
  EXPECT_EQ(r.code, 0) << r.out;
  auto cfg = harness::ConfigFromJson(harness::Json::parse(Slurp(dir / "o" / "config.json")));
  EXPECT_EQ(cfg.seed, 4u);
  EXPECT_EQ(cfg.programs, 5);
}

TEST(Cli, Rules) {
  CliRun r = Cli("rules");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("84 rules"), std::string::npos);
  EXPECT_NE(r.out.find("one-div"), std::string::npos);
}

TEST(Cli, EmitWalkthroughCircuits) {
  const fs::path dir = TempDir();
  std::ofstream(dir / "c1.il") << "inputs : a, b, c\noutputs: out\nout = (a % (b + c))\n";
  std::ofstream(dir / "c2.il") << "inputs : a, b, c\noutputs: out\nout = (a % ((c + 0) + b))\n";
  CliRun r = Cli(fmt::format("emit --circuit {} --circuit {} --dir {}", (dir / "c1.il").string(),
                          (dir / "c2.il").string(), dir.string()));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(Slurp(dir / "product.rs").find("c1_out != c2_out"), std::string::npos);
}

TEST(Cli, UsageAndConfigErrors) {
  EXPECT_EQ(Cli("").code, 2);
  EXPECT_EQ(Cli("frobnicate").code, 2);
  EXPECT_EQ(Cli("fuzz --programs many").code, 2);
  EXPECT_EQ(Cli("fuzz --weaknesses W_NOPE --programs 1").code, 2);
  EXPECT_EQ(Cli("fuzz --functions-min 1 --programs 1").code, 2);
  EXPECT_EQ(Cli("fuzz --inject maybe").code, 2);
  EXPECT_EQ(Cli("replay /nonexistent/finding.json").code, 1);
}

TEST(Cli, BrokenAdapterExitsThree) {
  CliRun r = Cli("fuzz --programs 1 --vm other --adapter /nonexistent/adapter");
  EXPECT_EQ(r.code, 3) << r.out;
}

}  // namespace
}  // namespace zkfuzz
