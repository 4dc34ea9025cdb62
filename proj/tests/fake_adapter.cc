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

// Test double for an external zkVM: speaks the adapter protocol on
// stdin/stdout and runs the reference VM internally.
//
//   fake_adapter [--weaknesses W1,W2] [--trace-dir DIR] [--fail-build]
//                [--die-on-run]

#include <cstring>
#include <fstream>
#include <iostream>
#include <map>

#include "json.hpp"
#include "zkfuzz/adapter.h"

using json = nlohmann::json;
using namespace zkfuzz;

int main(int argc, char** argv) {
  std::vector<std::string> weaknesses;
  std::string trace_dir;
  bool fail_build = false, die_on_run = false;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--weaknesses" && i + 1 < argc) {
      std::string list = argv[++i];
      for (std::size_t pos = 0; pos <= list.size();) {
        std::size_t comma = std::min(list.find(',', pos), list.size());
        if (comma > pos) weaknesses.push_back(list.substr(pos, comma - pos));
        pos = comma + 1;
      }
    } else if (a == "--trace-dir" && i + 1 < argc) {
      trace_dir = argv[++i];
    } else if (a == "--fail-build") {
      fail_build = true;
    } else if (a == "--die-on-run") {
      die_on_run = true;
    }
  }
  harness::RefVmAdapter vm(vm::WeaknessSet::FromNames(weaknesses));
  std::map<std::string, harness::Artifact> artifacts;
  int runs = 0;
  for (std::string line; std::getline(std::cin, line);) {
    json req = json::parse(line, nullptr, false);
    json reply;
    const std::string cmd = req.is_object() ? req.value("cmd", "") : "";
    if (cmd == "hello") {
      reply = {{"status", "ok"}, {"id", "fakevm"}, {"version", "0.1"}};
    } else if (cmd == "build") {
      if (fail_build) {
        reply = {{"status", "error"}, {"error", "toolchain unavailable"}};
      } else {
        std::vector<il::Circuit> circuits;
        for (const json& c : req.at("circuits")) {
          circuits.push_back(il::ParseCircuit(c.get<std::string>()));
        }
        codegen::ProductProgram product = codegen::MakeProduct(circuits);
        const std::string handle = "a" + std::to_string(artifacts.size());
        artifacts[handle] = vm.Build(product, req.at("source").get<std::string>());
        reply = {{"status", "ok"}, {"artifact", handle}};
      }
    } else if (cmd == "run") {
      if (die_on_run) return 1;
      auto it = artifacts.find(req.at("artifact").get<std::string>());
      if (it == artifacts.end()) {
        reply = {{"status", "error"}, {"error", "unknown artifact"}};
      } else {
        std::optional<inject::InjectionPlan> plan;
        if (!req.at("plan").is_null()) {
          const json& p = req["plan"];
          plan = inject::InjectionPlan{
              *inject::InjectionTypeFromName(p.at("type").get<std::string>()),
              p.at("target_step").get<std::uint64_t>(),
              p.at("payload_seed").get<std::uint64_t>()};
        }
        auto inputs = req.at("inputs").get<std::vector<il::Word>>();
        harness::VmOutcome o = vm.Run(it->second, inputs, plan);
        reply = {{"status", "ok"},
                 {"output", o.output},
                 {"exit_code", o.exit_code},
                 {"trace_path", nullptr}};
        if (!trace_dir.empty() && o.trace) {
          std::string path = trace_dir + "/run" + std::to_string(runs++) + ".trace";
          std::ofstream(path) << vm::DumpTrace(*o.trace);
          reply["trace_path"] = path;
        }
      }
    } else {
      reply = {{"status", "error"}, {"error", "unknown command"}};
    }
    std::cout << reply.dump() << std::endl;
  }
  return 0;
}
