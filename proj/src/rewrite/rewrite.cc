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
#include <utility>

#include "zkfuzz/rewrite.h"

namespace zkfuzz::rewrite {

using il::Expr;
using il::ExprKind;
using il::TypeTag;

namespace {

bool SamePayload(const Expr& p, const Expr& e) {
  switch (p.kind()) {
    case ExprKind::kIntLit:
      return e.int_value() == p.int_value();
    case ExprKind::kBoolLit:
      return e.bool_value() == p.bool_value();
    case ExprKind::kVar:
      return e.name() == p.name();
    case ExprKind::kIntBin:
    case ExprKind::kBoolBin:
    case ExprKind::kCmp:
    case ExprKind::kCall:
      // Every op accessor reads the same byte.
      return static_cast<int>(p.int_op()) == static_cast<int>(e.int_op());
    default:
      return true;
  }
}

bool Match(const Expr& p, const Expr& e, Binding& b) {
  if (p.kind() == ExprKind::kMeta) {
    if (p.annotation() && il::TypeOf(e) != p.annotation()) return false;
    auto [it, inserted] = b.try_emplace(p.name(), e);
    return inserted || it->second == e;
  }
  if (p.kind() == ExprKind::kFresh) return false;
  if (p.kind() != e.kind() || !SamePayload(p, e) ||
      p.children().size() != e.children().size()) {
    return false;
  }
  for (std::size_t i = 0; i < p.children().size(); ++i) {
    if (!Match(p.child(i), e.child(i), b)) return false;
  }
  return true;
}

void CollectMetas(const Expr& e, ExprKind kind, std::set<std::string>& out) {
  if (e.kind() == kind) out.insert(e.name());
  for (const Expr& c : e.children()) CollectMetas(c, kind, out);
}

Expr Subst(const Expr& t, const Binding& b, const FreshSource& fresh,
           std::map<std::string, Expr>& drawn) {
  switch (t.kind()) {
    case ExprKind::kMeta: {
      auto it = b.find(t.name());
      if (it == b.end()) {
        throw il::TypeError("unbound metavariable ?" + t.name());
      }
      return it->second;
    }
    case ExprKind::kFresh: {
      auto it = drawn.find(t.name());
      if (it != drawn.end()) return it->second;
      Expr value = Expr::IntLit(0);
      if (*t.annotation() == TypeTag::kBool) {
        value = Expr::BoolLit(Bernoulli(*fresh.rng, 0.5));
      } else {
        il::Word w = gen::DrawLiteral(*fresh.rng, *fresh.literals);
        // A zero draw is replaced by a uniform nonzero word, so this also
        // terminates when the pool holds nothing but zero.
        while (fresh.force_nonzero && w == 0) w = UniformWord(*fresh.rng);
        value = Expr::IntLit(w);
      }
      drawn.emplace(t.name(), value);
      return value;
    }
    default:
      break;
  }
  if (t.children().empty()) return t;
  std::vector<Expr> kids;
  kids.reserve(t.children().size());
  for (const Expr& c : t.children()) kids.push_back(Subst(c, b, fresh, drawn));
  return t.WithChildren(std::move(kids));
}

void Infer(const Expr& e, std::optional<TypeTag> want,
           std::map<std::string, TypeTag>& out) {
  switch (e.kind()) {
    case ExprKind::kMeta: {
      std::optional<TypeTag> t = e.annotation() ? e.annotation() : want;
      if (!t) throw il::TypeError("cannot infer type of ?" + e.name());
      if (want && *t != *want) {
        throw il::TypeError("annotation conflict on ?" + e.name());
      }
      auto [it, inserted] = out.emplace(e.name(), *t);
      if (!inserted && it->second != *t) {
        throw il::TypeError("inconsistent use of ?" + e.name());
      }
      return;
    }
    case ExprKind::kIntBin:
      Infer(e.child(0), TypeTag::kInt, out);
      Infer(e.child(1), TypeTag::kInt, out);
      return;
    case ExprKind::kBoolBin:
    case ExprKind::kNot:
      for (const Expr& c : e.children()) Infer(c, TypeTag::kBool, out);
      return;
    case ExprKind::kCmp:
    case ExprKind::kCall:
      for (const Expr& c : e.children()) Infer(c, TypeTag::kInt, out);
      return;
    case ExprKind::kIte:
      Infer(e.child(0), TypeTag::kBool, out);
      Infer(e.child(1), TypeTag::kInt, out);
      Infer(e.child(2), TypeTag::kInt, out);
      return;
    default:
      return;
  }
}

void Sites(const Expr& e, const Expr& pattern, Path& path,
           std::vector<Path>& out) {
  if (MatchAt(pattern, e)) out.push_back(path);
  for (std::size_t i = 0; i < e.children().size(); ++i) {
    // The exponent of ** must stay the literal 2 or 3.
    if (e.kind() == ExprKind::kIntBin && e.int_op() == il::IntOp::kPow && i == 1) {
      continue;
    }
    path.push_back(i);
    Sites(e.child(i), pattern, path, out);
    path.pop_back();
  }
}

}  // namespace

RewriteRule MakeRule(std::string id, std::string pattern_text,
                     std::string template_text) {
  Expr pattern = il::ParseExpr(pattern_text);
  Expr tmpl = il::ParseExpr(template_text);
  std::set<std::string> bound;
  std::set<std::string> used;
  std::set<std::string> fresh_in_pattern;
  CollectMetas(pattern, ExprKind::kMeta, bound);
  CollectMetas(tmpl, ExprKind::kMeta, used);
  CollectMetas(pattern, ExprKind::kFresh, fresh_in_pattern);
  if (!fresh_in_pattern.empty()) {
    throw il::ParseError("rule " + id + ": fresh constant in match pattern");
  }
  for (const std::string& name : used) {
    if (!bound.contains(name)) {
      throw il::ParseError("rule " + id + ": template uses unbound ?" + name);
    }
  }
  return RewriteRule{std::move(id), std::move(pattern_text),
                     std::move(template_text), std::move(pattern),
                     std::move(tmpl)};
}

std::optional<Binding> MatchAt(const Expr& pattern, const Expr& expr) {
  Binding b;
  if (!Match(pattern, expr, b)) return std::nullopt;
  return b;
}

Expr Instantiate(const Expr& tmpl, const Binding& binding,
                 const FreshSource& fresh) {
  std::map<std::string, Expr> drawn;
  return Subst(tmpl, binding, fresh, drawn);
}

const Expr& SubexprAt(const Expr& root, const Path& path) {
  const Expr* cur = &root;
  for (std::size_t i : path) cur = &cur->child(i);
  return *cur;
}

namespace {

Expr ReplaceFrom(const Expr& node, const Path& path, std::size_t depth,
                 Expr with) {
  if (depth == path.size()) return with;
  std::vector<Expr> kids = node.children();
  std::size_t i = path[depth];
  kids.at(i) = ReplaceFrom(node.child(i), path, depth + 1, std::move(with));
  return node.WithChildren(std::move(kids));
}

}  // namespace

Expr ReplaceAt(const Expr& root, const Path& path, Expr with) {
  return ReplaceFrom(root, path, 0, std::move(with));
}

std::vector<Path> ApplicableSites(const il::Circuit& circuit,
                                  const RewriteRule& rule) {
  std::vector<Path> out;
  Path path;
  Sites(circuit.output_expr, rule.pattern, path, out);
  return out;
}

il::Circuit ApplyAt(const il::Circuit& circuit, const RewriteRule& rule,
                    const Path& site, Rng& rng,
                    const gen::GenConfig& literals) {
  const Expr& target = SubexprAt(circuit.output_expr, site);
  auto binding = MatchAt(rule.pattern, target);
  if (!binding) {
    throw std::invalid_argument("rule " + rule.id +
                                " does not match at the given site");
  }
  FreshSource fresh{&rng, &literals, rule.id == "one-div"};
  il::Circuit out = circuit;
  out.output_expr = ReplaceAt(circuit.output_expr, site,
                              Instantiate(rule.tmpl, *binding, fresh));
  return out;
}

TransformResult Transform(const il::Circuit& circuit,
                          std::span<const RewriteRule> catalog, int n_rules,
                          Rng& rng, const gen::GenConfig& literals) {
  TransformResult result{circuit, {}, false};
  for (int step = 0; step < n_rules; ++step) {
    std::vector<std::pair<std::size_t, Path>> pairs;
    for (std::size_t r = 0; r < catalog.size(); ++r) {
      for (Path& p : ApplicableSites(result.circuit, catalog[r])) {
        pairs.emplace_back(r, std::move(p));
      }
    }
    if (pairs.empty()) {
      result.stalled = true;
      break;
    }
    auto& [r, site] = pairs[UniformIndex(rng, pairs.size())];
    result.circuit = ApplyAt(result.circuit, catalog[r], site, rng, literals);
    result.steps.push_back({catalog[r].id, site});
  }
  return result;
}

std::map<std::string, TypeTag> InferMetaTypes(const Expr& pattern) {
  std::map<std::string, TypeTag> out;
  Infer(pattern, il::TypeOf(pattern), out);
  return out;
}

}  // namespace zkfuzz::rewrite
