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

#include <fmt/format.h>

#include "zkfuzz/harness.h"
#include "zkfuzz/rewrite.h"

namespace zkfuzz::harness {

namespace {

constexpr std::size_t kMaxRelocations = 32;

struct Attempt {
  Verdict verdict = Verdict::kOk;
  VmOutcome normal;
  std::optional<VmOutcome> injected;
  std::optional<inject::InjectionPlan> plan;
};

// Runs the product of `circuits` on the report's inputs. With a plan, the
// injection is first tried at the planned step and then relocated to other
// rows executing the same mnemonic.
std::optional<Attempt> Reproduce(const FindingReport& report,
                                 const std::vector<il::Circuit>& circuits,
                                 VmAdapter& adapter) {
  Attempt a;
  Artifact artifact;
  try {
    codegen::ProductProgram product = codegen::MakeProduct(circuits);
    artifact = adapter.Build(product, codegen::EmitProductSource(product));
    a.normal = adapter.Run(artifact, report.inputs, std::nullopt);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (!report.plan) {
    a.verdict = Classify(a.normal, nullptr);
    if (a.verdict != report.verdict) return std::nullopt;
    return a;
  }
  std::vector<std::uint64_t> steps;
  if (a.normal.trace) {
    const auto& rows = a.normal.trace->rows;
    auto matches = [&](std::uint64_t step) {
      return step < rows.size() &&
             vm::Mnemonic(rows[step].instr.op) == report.target_mnemonic;
    };
    if (matches(report.plan->target_step)) steps.push_back(report.plan->target_step);
    for (std::uint64_t s = 0; s < rows.size() && steps.size() < kMaxRelocations; ++s) {
      if (s != report.plan->target_step && matches(s)) steps.push_back(s);
    }
  } else {
    steps.push_back(report.plan->target_step);
  }
  for (std::uint64_t step : steps) {
    inject::InjectionPlan plan = *report.plan;
    plan.target_step = step;
    try {
      VmOutcome injected = adapter.Run(artifact, report.inputs, plan);
      if (Classify(a.normal, &injected) == report.verdict) {
        a.verdict = report.verdict;
        a.injected = std::move(injected);
        a.plan = plan;
        return a;
      }
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

void CollectPaths(const il::Expr& e, rewrite::Path& prefix,
                  std::vector<rewrite::Path>& out) {
  out.push_back(prefix);
  for (std::size_t i = 0; i < e.children().size(); ++i) {
    prefix.push_back(i);
    CollectPaths(e.child(i), prefix, out);
    prefix.pop_back();
  }
}

il::Env InputEnv(const il::Circuit& c, const std::vector<Word>& inputs) {
  il::Env env;
  for (std::size_t i = 0; i < c.inputs.size() && i < inputs.size(); ++i) {
    env[c.inputs[i].name] = inputs[i];
  }
  return env;
}

}  // namespace

ReplayResult Replay(const FindingReport& report, VmAdapter& adapter) {
  ReplayResult result;
  if (adapter.id() != report.vm_id || adapter.version() != report.vm_version) {
    result.warnings.push_back(
        fmt::format("finding was recorded on {} {}, replaying on {} {}",
                    report.vm_id, report.vm_version, adapter.id(),
                    adapter.version()));
  }
  if (auto* ref = dynamic_cast<RefVmAdapter*>(&adapter);
      ref && ref->weaknesses() != report.weaknesses) {
    result.warnings.push_back(fmt::format(
        "weakness set differs from the recorded one ({})",
        fmt::join(report.weaknesses.Names(), ",")));
  }
  codegen::ProductProgram product = codegen::MakeProduct(report.circuits);
  Artifact artifact =
      adapter.Build(product, codegen::EmitProductSource(product));
  result.normal = adapter.Run(artifact, report.inputs, std::nullopt);
  if (report.plan) {
    result.injected = adapter.Run(artifact, report.inputs, report.plan);
  }
  result.verdict = Classify(result.normal,
                            result.injected ? &*result.injected : nullptr);
  return result;
}

FindingReport Minimize(const FindingReport& report, VmAdapter& adapter) {
  std::vector<il::Circuit> circuits = report.circuits;
  std::optional<Attempt> best = Reproduce(report, circuits, adapter);
  if (!best) throw MinimizeError("the finding does not reproduce");

  auto accept = [&](std::vector<il::Circuit> candidate) {
    auto attempt = Reproduce(report, candidate, adapter);
    if (!attempt) return false;
    circuits = std::move(candidate);
    best = std::move(attempt);
    return true;
  };

  bool changed = true;
  while (changed) {
    changed = false;

    for (std::size_t j = circuits.size(); j-- > 0 && circuits.size() > 2;) {
      auto candidate = circuits;
      candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(j));
      changed |= accept(std::move(candidate));
    }

    for (std::size_t j = 1; j < circuits.size(); ++j) {
      if (circuits[j].output_expr == circuits[0].output_expr) continue;
      auto candidate = circuits;
      candidate[j].output_expr = circuits[0].output_expr;
      changed |= accept(std::move(candidate));
    }

    // Pre-order visits parents before children, so larger subtrees go first.
    for (std::size_t j = 0; j < circuits.size(); ++j) {
      bool progress = true;
      while (progress) {
        progress = false;
        std::vector<rewrite::Path> paths;
        rewrite::Path prefix;
        CollectPaths(circuits[j].output_expr, prefix, paths);
        const il::Env env = InputEnv(circuits[j], report.inputs);
        for (const rewrite::Path& path : paths) {
          const il::Expr& sub = rewrite::SubexprAt(circuits[j].output_expr, path);
          if (sub.kind() == il::ExprKind::kIntLit ||
              sub.kind() == il::ExprKind::kBoolLit) {
            continue;
          }
          const il::Value v = il::EvalExpr(sub, env);
          il::Expr lit = il::TypeOf(sub) == il::TypeTag::kBool
                             ? il::Expr::BoolLit(v.as_bool())
                             : il::Expr::IntLit(v.bits);
          auto candidate = circuits;
          candidate[j].output_expr =
              rewrite::ReplaceAt(circuits[j].output_expr, path, lit);
          try {
            il::ValidateCircuit(candidate[j]);
          } catch (const il::TypeError&) {
            continue;
          }
          if (accept(std::move(candidate))) {
            progress = changed = true;
            break;
          }
        }
      }
    }
  }

  FindingReport out = report;
  out.circuits = std::move(circuits);
  out.plan = best->plan;
  out.normal = std::move(best->normal);
  out.injected = std::move(best->injected);
  out.signature = Signature(out.verdict, out.normal,
                            out.injected ? &*out.injected : nullptr,
                            out.target_mnemonic);
  out.trace_file.clear();
  return out;
}

}  // namespace zkfuzz::harness
