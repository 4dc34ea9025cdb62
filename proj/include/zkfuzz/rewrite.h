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

// Term rewriting over IL expressions: pattern matching with capture and
// fresh-constant metavariables, template instantiation, and stacked random
// application of the rule catalog to build equivalent circuit variants.

#ifndef ZKFUZZ_REWRITE_H_
#define ZKFUZZ_REWRITE_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zkfuzz/circuit_gen.h"
#include "zkfuzz/il.h"
#include "zkfuzz/random.h"

namespace zkfuzz::rewrite {

struct RewriteRule {
  std::string id;
  std::string pattern_text;
  std::string template_text;
  il::Expr pattern;
  il::Expr tmpl;
};

// Builds a rule from table text. Throws il::ParseError on malformed text or
// when the template uses a capture variable the pattern does not bind, or
// when the pattern contains a fresh constant.
RewriteRule MakeRule(std::string id, std::string pattern_text,
                     std::string template_text);

// The full catalog, in table order. Built once, immutable afterwards.
const std::vector<RewriteRule>& Catalog();
const RewriteRule* FindRule(std::string_view id);

using Binding = std::map<std::string, il::Expr, std::less<>>;

std::optional<Binding> MatchAt(const il::Expr& pattern, const il::Expr& expr);

// Source of $r constants. Each distinct fresh name is drawn once per call.
struct FreshSource {
  Rng* rng;
  const gen::GenConfig* literals;
  bool force_nonzero = false;
};

il::Expr Instantiate(const il::Expr& tmpl, const Binding& binding,
                     const FreshSource& fresh);

// Position of a subexpression: child indices from the root.
using Path = std::vector<std::size_t>;

const il::Expr& SubexprAt(const il::Expr& root, const Path& path);
il::Expr ReplaceAt(const il::Expr& root, const Path& path, il::Expr with);

// All positions (pre-order) where the rule's pattern matches.
std::vector<Path> ApplicableSites(const il::Circuit& circuit,
                                  const RewriteRule& rule);

// Rewrites the subexpression at `site`. Precondition: the rule matches there.
il::Circuit ApplyAt(const il::Circuit& circuit, const RewriteRule& rule,
                    const Path& site, Rng& rng,
                    const gen::GenConfig& literals);

struct AppliedRewrite {
  std::string rule_id;
  Path site;
};

struct TransformResult {
  il::Circuit circuit;
  std::vector<AppliedRewrite> steps;
  // Set when some step found no applicable (rule, site) pair.
  bool stalled = false;
};

// Applies `n_rules` sequential rewrites, each chosen uniformly among all
// applicable (rule, site) pairs.
TransformResult Transform(const il::Circuit& circuit,
                          std::span<const RewriteRule> catalog, int n_rules,
                          Rng& rng, const gen::GenConfig& literals);

// Types of the capture variables of a pattern, inferred from operator
// context and annotations. Throws il::TypeError on conflicts.
std::map<std::string, il::TypeTag> InferMetaTypes(const il::Expr& pattern);

}  // namespace zkfuzz::rewrite

#endif  // ZKFUZZ_REWRITE_H_
