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

#include <utility>

#include "zkfuzz/rewrite.h"

namespace zkfuzz::rewrite {

namespace {

struct RuleText {
  const char* id;
  const char* pattern;
  const char* tmpl;
};

// Rule table, written in the IL surface syntax. Ids are kept verbatim,
// including "comm-lan".
constexpr RuleText kRuleTable[] = {
    {"comm-or", "?a | ?b", "?b | ?a"},
    {"assoc-and", "(?a & ?b) & ?c", "?a & (?b & ?c)"},
    {"comm-and", "?a & ?b", "?b & ?a"},
    {"and-zero", "?a & 0", "0"},
    {"inv-xor", "?a ^ ?a", "0"},
    {"comm-xor", "?a ^ ?b", "?b ^ ?a"},
    {"zero-or-rev", "?a | 0", "?a"},
    {"zero-xor-rev", "?a ^ 0", "?a"},
    {"inv-xor-rev", "0", "($r:int ^ $r:int)"},
    {"zero-or", "?a:int", "(?a | 0)"},
    {"zero-xor", "?a:int", "(?a ^ 0)"},
    {"idem-and", "?a:int", "(?a & ?a)"},
    {"zero-and", "0", "($r:int & 0)"},
    {"one-div", "1", "($r:int / $r:int)"},
    {"comm-add", "?a + ?b", "?b + ?a"},
    {"comm-mul", "?a * ?b", "?b * ?a"},
    {"dist-mul-add", "(?a + ?b) * ?c", "(?a * ?c) + (?b * ?c)"},
    {"dist-add-mul", "(?a * ?c) + (?b * ?c)", "(?a + ?b) * ?c"},
    {"assoc-add", "(?a + ?b) + ?c", "?a + (?b + ?c)"},
    {"assoc-add-rev", "?a + (?b + ?c)", "(?a + ?b) + ?c"},
    {"assoc-mul", "(?a * ?b) * ?c", "?a * (?b * ?c)"},
    {"assoc-mul-rev", "?a * (?b * ?c)", "(?a * ?b) * ?c"},
    {"zero-add-des", "?a + 0", "?a"},
    {"one-mul-des", "?a * 1", "?a"},
    {"one-div-des", "?a / 1", "?a"},
    {"inv-zero-add-des", "?a - 0", "?a"},
    {"inv-add-des", "?a - ?a", "0"},
    {"inv-assoc-neg2pos", "(?a - ?b) - ?c", "?a - (?b + ?c)"},
    {"inv-assoc-pos2neg", "?a - (?b + ?c)", "(?a - ?b) - ?c"},
    {"pow2-to-mul", "?a ** 2", "?a * ?a"},
    {"pow3-to-mul", "?a ** 3", "(?a * ?a) * ?a"},
    {"mul-to-pow2", "?a * ?a", "?a ** 2"},
    {"mul-to-pow3", "(?a * ?a) * ?a", "?a ** 3"},
    {"zero-add-con", "?a:int", "?a + 0"},
    {"one-mul-con", "?a:int", "?a * 1"},
    {"one-div-con", "?a:int", "?a / 1"},
    {"rem-of-one-con", "0", "$r:int % 1"},
    {"rem-of-one-des", "?a % 1", "0"},
    {"and-to-rem", "?a & 1", "?a % 2"},
    {"rem-to-and", "?a % 2", "?a & 1"},
    {"inv-zero-add-con", "?a:int", "?a - 0"},
    {"inv-addition-exp", "?a - ?c", "?a + (0 - ?c)"},
    {"double-negation-add-con", "?a:int", "0 - (0 - ?a)"},
    {"add-sub-random-value", "?a:int", "(?a - $r:int) + $r:int"},
    {"zero-lor-des", "?a || F", "?a"},
    {"zero-land-des", "?a && T", "?a"},
    {"taut-lor", "?a || T", "T"},
    {"contra-land", "?a && F", "F"},
    {"assoc-lor", "(?a || ?b) || ?c", "?a || (?b || ?c)"},
    {"assoc-land", "(?a && ?b) && ?c", "?a && (?b && ?c)"},
    {"comm-lor", "?a || ?b", "?b || ?a"},
    {"comm-lan", "?a && ?b", "?b && ?a"},
    {"dist-lor-land", "(?a && ?b) || ?c", "(?a || ?c) && (?b || ?c)"},
    {"dist-land-lor", "(?a || ?c) && (?b || ?c)", "(?a && ?b) || ?c"},
    {"de-morgan-land-con", "!(?a && ?b)", "(!?a) || (!?b)"},
    {"de-morgan-land-des", "(!?a) || (!?b)", "!(?a && ?b)"},
    {"de-morgan-lor-con", "!(?a || ?b)", "(!?a) && (!?b)"},
    {"de-morgan-lor-des", "(!?a) && (!?b)", "!(?a || ?b)"},
    {"double-negation-des", "!(!?a)", "?a"},
    {"double-land-des", "?a && ?a", "?a"},
    {"double-lor-des", "?a || ?a", "?a"},
    {"double-lxor-des", "?a ^^ ?a", "F"},
    {"comm-lxor", "?a ^^ ?b", "?b ^^ ?a"},
    {"lxor-to-or-and", "?a ^^ ?b", "((!?a) && ?b) || (?a && (!?b))"},
    {"zero-lor-con", "?a:bool", "?a || F"},
    {"zero-land-con", "?a:bool", "?a && T"},
    {"double-negation-con", "?a:bool", "!(!?a)"},
    {"double-land-con", "?a:bool", "?a && ?a"},
    {"double-lor-con", "?a:bool", "?a || ?a"},
    {"double-lxor-con", "F", "$r:bool ^^ $r:bool"},
    {"or-and-to-lxor", "((!?a) && ?b) || (?a && (!?b))", "?a ^^ ?b"},
    {"commutativity-equ", "?a == ?b", "?b == ?a"},
    {"relation-geq-to-leq", "?a >= ?b", "?b <= ?a"},
    {"relation-leq-to-geq", "?a <= ?b", "?b >= ?a"},
    {"relation-leq-to-lth-and-equ", "?a <= ?b", "(?a < ?b) || (?a == ?b)"},
    {"relation-lth-and-equ-to-leq", "(?a < ?b) || (?a == ?b)", "?a <= ?b"},
    {"relation-geq-to-gth-and-equ", "?a >= ?b", "(?a > ?b) || (?a == ?b)"},
    {"relation-gth-and-equ-to-geq", "(?a > ?b) || (?a == ?b)", "?a >= ?b"},
    {"relation-leq-to-not-gth", "?a <= ?b", "!(?a > ?b)"},
    {"relation-not-gth-to-leq", "!(?a > ?b)", "?a <= ?b"},
    {"relation-geq-to-not-lth", "?a >= ?b", "!(?a < ?b)"},
    {"relation-not-lth-to-geq", "!(?a < ?b)", "?a >= ?b"},
    {"relation-neq-to-not-equ", "?a != ?b", "!(?a == ?b)"},
    {"relation-not-equ-to-neq", "!(?a == ?b)", "?a != ?b"},
};

std::vector<RewriteRule> BuildCatalog() {
  std::vector<RewriteRule> rules;
  rules.reserve(std::size(kRuleTable));
  for (const RuleText& r : kRuleTable) {
    rules.push_back(MakeRule(r.id, r.pattern, r.tmpl));
  }
  return rules;
}

}  // namespace

const std::vector<RewriteRule>& Catalog() {
  static const std::vector<RewriteRule> catalog = BuildCatalog();
  return catalog;
}

const RewriteRule* FindRule(std::string_view id) {
  for (const RewriteRule& r : Catalog()) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

}  // namespace zkfuzz::rewrite
