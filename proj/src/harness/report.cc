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

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "zkfuzz/harness.h"

namespace zkfuzz::harness {

namespace {

Json OutcomeToJson(const VmOutcome& o) {
  Json j = {{"output", o.output},
            {"exit_code", o.exit_code},
            {"verified", o.verified ? Json(*o.verified) : Json(nullptr)},
            {"constraint", o.constraint},
            {"constraint_row", o.constraint_row},
            {"detail", o.detail},
            {"bypasses", o.bypasses},
            {"fault", nullptr}};
  if (o.fault) {
    j["fault"] = {{"type", inject::Name(o.fault->type)},
                  {"step", o.fault->step},
                  {"effective", o.fault->effective},
                  {"description", o.fault->description}};
  }
  return j;
}

inject::InjectionType TypeFromJson(const Json& j) {
  auto t = inject::InjectionTypeFromName(j.get<std::string>());
  if (!t) throw std::runtime_error("unknown injection type " + j.dump());
  return *t;
}

VmOutcome OutcomeFromJson(const Json& j) {
  VmOutcome o;
  o.output = j.at("output");
  o.exit_code = j.at("exit_code");
  if (!j.at("verified").is_null()) o.verified = j.at("verified").get<bool>();
  o.constraint = j.at("constraint");
  o.constraint_row = j.at("constraint_row");
  o.detail = j.at("detail");
  o.bypasses = j.at("bypasses").get<std::vector<std::string>>();
  if (!j.at("fault").is_null()) {
    const Json& f = j.at("fault");
    o.fault = vm::AppliedFault{.type = TypeFromJson(f.at("type")),
                               .step = f.at("step"),
                               .effective = f.at("effective"),
                               .description = f.at("description")};
  }
  return o;
}

}  // namespace

std::string Signature(Verdict verdict, const VmOutcome& normal,
                      const VmOutcome* injected,
                      const std::string& target_mnemonic) {
  std::string constraint = "-";
  if (verdict == Verdict::kCompletenessBug) {
    constraint = normal.constraint.empty()
                     ? fmt::format("exit{}", normal.exit_code)
                     : normal.constraint;
  } else if (verdict == Verdict::kSoundnessBug && injected &&
             !injected->bypasses.empty()) {
    // "W_TRIREG/C2@17" -> "W_TRIREG/C2"; rows do not distinguish bugs.
    std::set<std::string> kinds;
    for (const std::string& b : injected->bypasses) {
      kinds.insert(b.substr(0, b.find('@')));
    }
    constraint = fmt::format("{}", fmt::join(kinds, "+"));
  }
  const bool has_target =
      verdict == Verdict::kSoundnessBug && !target_mnemonic.empty();
  return fmt::format("{}|{}|{}", Name(verdict), constraint,
                     has_target ? target_mnemonic : "-");
}

Json ReportToJson(const FindingReport& r) {
  std::vector<std::string> circuits;
  for (const il::Circuit& c : r.circuits) circuits.push_back(il::RenderCircuit(c));
  Json j = {{"verdict", Name(r.verdict)},
            {"signature", r.signature},
            {"campaign_seed", r.campaign_seed},
            {"program_index", r.program_index},
            {"round", r.round},
            {"vm_id", r.vm_id},
            {"vm_version", r.vm_version},
            {"weaknesses", r.weaknesses.Names()},
            {"step_budget", r.step_budget},
            {"circuits", circuits},
            {"inputs", r.inputs},
            {"plan", nullptr},
            {"target_mnemonic", r.target_mnemonic},
            {"normal", OutcomeToJson(r.normal)},
            {"injected", r.injected ? OutcomeToJson(*r.injected) : Json(nullptr)},
            {"trace_file", r.trace_file}};
  if (r.plan) {
    j["plan"] = {{"type", inject::Name(r.plan->type)},
                 {"target_step", r.plan->target_step},
                 {"payload_seed", r.plan->payload_seed}};
  }
  return j;
}

FindingReport ReportFromJson(const Json& j) {
  FindingReport r;
  try {
    auto verdict = VerdictFromName(j.at("verdict").get<std::string>());
    if (!verdict) throw std::runtime_error("unknown verdict");
    r.verdict = *verdict;
    r.signature = j.at("signature");
    r.campaign_seed = j.at("campaign_seed");
    r.program_index = j.at("program_index");
    r.round = j.at("round");
    r.vm_id = j.at("vm_id");
    r.vm_version = j.at("vm_version");
    r.weaknesses = vm::WeaknessSet::FromNames(
        j.at("weaknesses").get<std::vector<std::string>>());
    r.step_budget = j.at("step_budget");
    for (const Json& c : j.at("circuits")) {
      r.circuits.push_back(il::ParseCircuit(c.get<std::string>()));
    }
    r.inputs = j.at("inputs").get<std::vector<Word>>();
    if (!j.at("plan").is_null()) {
      const Json& p = j.at("plan");
      r.plan = inject::InjectionPlan{.type = TypeFromJson(p.at("type")),
                                     .target_step = p.at("target_step"),
                                     .payload_seed = p.at("payload_seed")};
    }
    r.target_mnemonic = j.at("target_mnemonic");
    r.normal = OutcomeFromJson(j.at("normal"));
    if (!j.at("injected").is_null()) r.injected = OutcomeFromJson(j.at("injected"));
    r.trace_file = j.at("trace_file");
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("malformed finding report: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("malformed finding report: ") + e.what());
  }
  return r;
}

FindingReport LoadReport(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  return ReportFromJson(j);
}

}  // namespace zkfuzz::harness
