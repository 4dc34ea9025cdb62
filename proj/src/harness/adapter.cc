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

#include "zkfuzz/adapter.h"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fstream>
#include <mutex>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

namespace zkfuzz::harness {

using nlohmann::json;

Artifact RefVmAdapter::Build(const codegen::ProductProgram& product,
                             const std::string&) {
  auto program =
      std::make_shared<const vm::RefProgram>(codegen::CompileToRefVm(product));
  return {"refvm-program", std::move(program)};
}

VmOutcome RefVmAdapter::Run(const Artifact& artifact,
                            std::span<const Word> inputs,
                            const std::optional<inject::InjectionPlan>& plan) {
  if (!artifact.program) throw AdapterError("artifact was not built by refvm");
  vm::ExecOptions options;
  options.step_budget = step_budget_;
  options.plan = plan;
  vm::ExecResult r = vm::Execute(*artifact.program, inputs, options);
  VmOutcome out;
  out.output = r.trace.final_output;
  out.fault = std::move(r.fault);
  switch (r.trace.exit) {
    case vm::ExitStatus::kFault:
      out.exit_code = kExitFault;
      out.detail = r.trace.fault;
      break;
    case vm::ExitStatus::kBudgetExceeded:
      out.exit_code = kExitBudget;
      out.detail = "step budget exceeded";
      break;
    case vm::ExitStatus::kClean: {
      vm::VerifyResult v =
          vm::Verify(*artifact.program, inputs, r.trace, weaknesses_);
      out.verified = v.accepted;
      out.exit_code = v.accepted ? kExitOk : kExitRejected;
      out.constraint = v.constraint;
      out.constraint_row = v.row;
      out.detail = v.detail;
      for (const vm::Bypass& b : v.bypasses) {
        out.bypasses.push_back(
            fmt::format("{}/{}@{}", vm::Name(b.weakness), b.constraint, b.row));
      }
      break;
    }
  }
  out.trace = std::move(r.trace);
  return out;
}

struct ExternalProcessAdapter::Process {
  pid_t pid = -1;
  FILE* to_child = nullptr;
  FILE* from_child = nullptr;
  std::mutex mu;
  int next_artifact = 0;

  json Request(const json& msg) {
    std::string line = msg.dump() + "\n";
    if (std::fwrite(line.data(), 1, line.size(), to_child) != line.size() ||
        std::fflush(to_child) != 0) {
      throw AdapterError("failed to write to adapter process");
    }
    char* buf = nullptr;
    std::size_t cap = 0;
    ssize_t n = getline(&buf, &cap, from_child);
    std::string reply = n > 0 ? std::string(buf, static_cast<std::size_t>(n))
                              : std::string();
    std::free(buf);
    if (n <= 0) throw AdapterError("adapter process closed its output");
    json r;
    try {
      r = json::parse(reply);
    } catch (const json::parse_error& e) {
      throw AdapterError(std::string("malformed adapter reply: ") + e.what());
    }
    if (r.value("status", "") != "ok") {
      throw AdapterError("adapter error: " + r.value("error", r.dump()));
    }
    return r;
  }
};

ExternalProcessAdapter::ExternalProcessAdapter(std::vector<std::string> argv)
    : process_(std::make_unique<Process>()) {
  if (argv.empty()) throw AdapterError("empty adapter command");
  // A dead adapter must surface as AdapterError, not kill the fuzzer.
  signal(SIGPIPE, SIG_IGN);
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
    throw AdapterError("pipe() failed");
  }
  pid_t pid = fork();
  if (pid < 0) throw AdapterError("fork() failed");
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    std::vector<char*> args;
    for (std::string& a : argv) args.push_back(a.data());
    args.push_back(nullptr);
    execvp(args[0], args.data());
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  // The child must not inherit our ends if we spawn more adapters.
  fcntl(in_pipe[1], F_SETFD, FD_CLOEXEC);
  fcntl(out_pipe[0], F_SETFD, FD_CLOEXEC);
  process_->pid = pid;
  process_->to_child = fdopen(in_pipe[1], "w");
  process_->from_child = fdopen(out_pipe[0], "r");
  json hello = process_->Request({{"cmd", "hello"}});
  id_ = hello.value("id", id_);
  version_ = hello.value("version", version_);
}

ExternalProcessAdapter::~ExternalProcessAdapter() {
  if (!process_ || process_->pid < 0) return;
  if (process_->to_child) std::fclose(process_->to_child);
  if (process_->from_child) std::fclose(process_->from_child);
  int status = 0;
  waitpid(process_->pid, &status, 0);
}

Artifact ExternalProcessAdapter::Build(const codegen::ProductProgram& product,
                                       const std::string& source) {
  json circuits = json::array();
  for (const il::Circuit& c : product.circuits) {
    circuits.push_back(il::RenderCircuit(c));
  }
  std::lock_guard lock(process_->mu);
  json r = process_->Request({{"cmd", "build"},
                              {"source", source},
                              {"circuits", circuits},
                              {"arity", product.arity()}});
  return {r.value("artifact", ""), nullptr};
}

VmOutcome ExternalProcessAdapter::Run(
    const Artifact& artifact, std::span<const Word> inputs,
    const std::optional<inject::InjectionPlan>& plan) {
  json msg = {{"cmd", "run"},
              {"artifact", artifact.handle},
              {"inputs", std::vector<Word>(inputs.begin(), inputs.end())},
              {"plan", nullptr}};
  if (plan) {
    msg["plan"] = {{"type", inject::Name(plan->type)},
                   {"target_step", plan->target_step},
                   {"payload_seed", plan->payload_seed}};
  }
  json r;
  {
    std::lock_guard lock(process_->mu);
    r = process_->Request(msg);
  }
  VmOutcome out;
  try {
    out.output = r.at("output").get<Word>();
    out.exit_code = r.at("exit_code").get<int>();
  } catch (const json::exception& e) {
    throw AdapterError(std::string("incomplete run reply: ") + e.what());
  }
  if (r.contains("trace_path") && r["trace_path"].is_string()) {
    std::ifstream in(r["trace_path"].get<std::string>());
    if (!in) throw AdapterError("cannot open trace file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      out.trace = vm::ParseTrace(ss.str());
    } catch (const vm::TraceFormatError& e) {
      throw AdapterError(std::string("bad trace from adapter: ") + e.what());
    }
  }
  return out;
}

}  // namespace zkfuzz::harness
