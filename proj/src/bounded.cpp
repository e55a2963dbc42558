// Copyright 2026 The boundsem Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "boundsem/bounded.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "boundsem/error.hpp"

namespace boundsem {

struct BoundedPlan::Node {
  enum class Op { Atom, Negate, SomeFalse, Forall, And };
  Op op = Op::Atom;
  Formula f = Formula::verum();  // Atom
  std::string var;               // Forall
  std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

using Node = BoundedPlan::Node;
using NodePtr = std::shared_ptr<const Node>;

FragmentKind forall_kind(const Formula& f) { return FragmentKind::of(Role::Forall, f); }

void check_pair_shape(const Formula& f, const DecisivePair& p) {
  check_shape(FragmentKind::of(Role::Forall, f), p.a);
  check_shape(FragmentKind::of(Role::Exists, f), p.e);
}

bool uniform_applies(const BoundedOptions& opts, const Formula& psi, const Fragment& a, const Fragment& e) {
  return opts.uniform_fast_path && a.is_uniform() && leq(forall_kind(psi), e, a.top());
}

// Keys of `a` that are ⊆ e2, paired with their images.
std::vector<Fragment::Entry> keys_below(const Formula& not_f, const Fragment& a, const Fragment& e2,
                                        const std::vector<Fragment>& dom) {
  FragmentKind kind = forall_kind(not_f);
  FragmentKind kk = kind.key();
  std::vector<Fragment::Entry> out;
  for (const auto& k : dom)
    if (subseteq(kk, k, e2)) out.emplace_back(k, *apply(kind, a, k));
  return out;
}

class Builder {
 public:
  explicit Builder(const BoundedOptions& opts) : opts_(opts) {}

  std::size_t nodes = 0;

  // nullptr when (a, e) is not decisive for f.
  NodePtr build(const Formula& f, const Fragment& a, const Fragment& e) {
    switch (f.kind()) {
      case Formula::Kind::Atomic: {
        auto n = make(Node::Op::Atom);
        n->f = f;
        return n;
      }
      case Formula::Kind::Forall: {
        NodePtr kid = build(f.body(), a, e);
        if (!kid) return nullptr;
        auto n = make(Node::Op::Forall);
        n->var = f.var();
        n->kids.push_back(std::move(kid));
        return n;
      }
      case Formula::Kind::And: {
        auto n = make(Node::Op::And);
        for (const auto& [i, ai] : a.components()) {
          const Fragment* r = e.component(i);
          if (!r) return nullptr;
          NodePtr kid = build(f.component(i), ai, *r);
          if (!kid) return nullptr;
          n->kids.push_back(std::move(kid));
        }
        return n;
      }
      case Formula::Kind::Not:
        return build_not(f, a, e);
    }
    return nullptr;
  }

 private:
  std::shared_ptr<Node> make(Node::Op op) {
    ++nodes;
    auto n = std::make_shared<Node>();
    n->op = op;
    return n;
  }

  NodePtr build_not(const Formula& f, const Fragment& a, const Fragment& e) {
    const Formula& psi = f.body();
    if (uniform_applies(opts_, psi, a, e)) {
      NodePtr kid = build(psi, e, a.uniform_value());
      if (!kid) return nullptr;
      auto n = make(Node::Op::Negate);
      n->kids.push_back(std::move(kid));
      return n;
    }
    std::vector<Fragment> below = enumerate_below(forall_kind(psi), e, opts_.cap);
    std::vector<Fragment> dom = domain(forall_kind(f), a, opts_.cap);
    std::map<std::pair<Fragment, Fragment>, NodePtr> memo;
    auto n = make(Node::Op::SomeFalse);
    for (const auto& e2 : below) {
      bool found = false;
      for (const auto& [k, v] : keys_below(f, a, e2, dom)) {
        auto key = std::make_pair(e2, v);
        auto it = memo.find(key);
        if (it == memo.end()) {
          NodePtr kid = build(psi, e2, v);
          it = memo.emplace(key, kid).first;
          if (kid) n->kids.push_back(kid);
        }
        found = found || it->second != nullptr;
      }
      if (!found) return nullptr;
    }
    return n;
  }

  const BoundedOptions& opts_;
};

bool run(const Node& n, const Structure& m, Env& env) {
  switch (n.op) {
    case Node::Op::Atom:
      return eval_fo(m, n.f, env);
    case Node::Op::Negate:
      return !run(*n.kids[0], m, env);
    case Node::Op::SomeFalse:
      for (const auto& k : n.kids)
        if (!run(*k, m, env)) return true;
      return false;
    case Node::Op::And:
      for (const auto& k : n.kids)
        if (!run(*k, m, env)) return false;
      return true;
    case Node::Op::Forall: {
      auto it = env.find(n.var);
      std::optional<Element> saved;
      if (it != env.end()) saved = it->second;
      bool all = true;
      for (Element u = 0; u < m.size() && all; ++u) {
        env[n.var] = u;
        all = run(*n.kids[0], m, env);
      }
      if (saved) env[n.var] = *saved;
      else env.erase(n.var);
      return all;
    }
  }
  return false;
}

class Compiler {
 public:
  explicit Compiler(const CompileOptions& opts) : opts_(opts), builder_(opts.bounded) {}

  Formula compile(const Formula& f, const Fragment& a, const Fragment& e) {
    switch (f.kind()) {
      case Formula::Kind::Atomic:
        return f;
      case Formula::Kind::Forall:
        return Formula::forall(f.var(), compile(f.body(), a, e));
      case Formula::Kind::And: {
        std::vector<Formula> parts;
        for (const auto& [i, ai] : a.components()) {
          const Fragment* r = e.component(i);
          if (!r) throw PreconditionError("pair is not decisive");
          parts.push_back(compile(f.component(i), ai, *r));
        }
        return Formula::conjunction(std::move(parts));
      }
      case Formula::Kind::Not:
        return compile_not(f, a, e);
    }
    return f;
  }

 private:
  Formula compile_not(const Formula& f, const Fragment& a, const Fragment& e) {
    const Formula& psi = f.body();
    if (uniform_applies(opts_.bounded, psi, a, e)) return Formula::negation(compile(psi, e, a.uniform_value()));
    FragmentKind kk = forall_kind(psi);
    std::vector<Fragment> below = enumerate_below(kk, e, opts_.bounded.cap);
    if (below.size() > opts_.max_disjuncts)
      throw BoundTooLarge("negation needs " + std::to_string(below.size()) + " disjuncts (cap " +
                          std::to_string(opts_.max_disjuncts) + ")");
    std::vector<Fragment> dom = domain(forall_kind(f), a, opts_.bounded.cap);
    std::vector<Formula> conj;
    for (const auto& e2 : below) {
      std::vector<Fragment::Entry> ok;
      for (auto& [k, v] : keys_below(f, a, e2, dom))
        if (builder_.build(psi, e2, v)) ok.emplace_back(k, v);
      if (ok.empty()) throw PreconditionError("pair is not decisive");
      // ⊆-maximal choice, greatest in canonical order among those
      const Fragment::Entry* best = nullptr;
      for (const auto& cand : ok) {
        bool maximal = true;
        for (const auto& other : ok)
          if (!(other.first == cand.first) && subseteq(kk, cand.first, other.first)) maximal = false;
        if (maximal && (!best || best->first < cand.first)) best = &cand;
      }
      Formula c = compile(psi, e2, best->second);
      if (std::find(conj.begin(), conj.end(), c) == conj.end()) conj.push_back(std::move(c));
    }
    if (conj.size() == 1) return Formula::negation(conj[0]);
    return Formula::negation(Formula::conjunction(std::move(conj)));
  }

  const CompileOptions& opts_;
  Builder builder_;
};

DecisivePair canonical_rec(const Formula& f, const DomainFn& domain, std::vector<Level>& path, bool exists) {
  switch (f.kind()) {
    case Formula::Kind::Atomic:
      return atom_pair();
    case Formula::Kind::Forall:
      return canonical_rec(f.body(), domain, path, exists);
    case Formula::Kind::Not:
      return negation_pair(canonical_rec(f.body(), domain, path, !exists));
    case Formula::Kind::And: {
      std::vector<std::pair<Nat, DecisivePair>> parts;
      if (f.width()) {
        for (Nat i = 0; i < *f.width(); ++i) parts.emplace_back(i, canonical_rec(f.component(i), domain, path, exists));
        return conjunction_pair(parts);
      }
      std::vector<Nat> idx = domain(path, exists);
      std::sort(idx.begin(), idx.end());
      idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
      for (Nat i : idx) {
        path.push_back({i, exists});
        parts.emplace_back(i, canonical_rec(f.component(i), domain, path, exists));
        path.pop_back();
      }
      return conjunction_pair(parts);
    }
  }
  return atom_pair();
}

}  // namespace

std::string encode(const DecisivePair& p) { return encode(p.a) + " " + encode(p.e); }

DecisivePair decode_pair(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  std::size_t start = i;
  if (i < text.size() && text[i] == '*') {
    ++i;
  } else {
    int depth = 0;
    do {
      if (i >= text.size()) throw ParseError("unterminated fragment", i);
      if (text[i] == '(') ++depth;
      if (text[i] == ')') --depth;
      ++i;
    } while (depth > 0);
  }
  Fragment a;
  try {
    a = decode(text.substr(start, i - start));
  } catch (const ParseError& err) {
    throw ParseError("bad forall fragment", start + err.position());
  }
  try {
    return {a, decode(text.substr(i))};
  } catch (const ParseError& err) {
    throw ParseError("bad exists fragment", i + err.position());
  }
}

bool is_decisive(const Formula& f, const DecisivePair& p, const BoundedOptions& opts) {
  check_pair_shape(f, p);
  Builder b(opts);
  return b.build(f, p.a, p.e) != nullptr;
}

BoundedPlan::BoundedPlan(const Formula& f, const DecisivePair& p, const BoundedOptions& opts) {
  check_pair_shape(f, p);
  Builder b(opts);
  root_ = b.build(f, p.a, p.e);
  if (!root_) throw PreconditionError("pair is not decisive for " + to_string(f));
  nodes_ = b.nodes;
}

bool BoundedPlan::eval(const Structure& m, const Env& env) const {
  Env scratch = env;
  return run(*root_, m, scratch);
}

bool eval_bounded(const Structure& m, const Formula& f, const DecisivePair& p, const Env& env,
                  const BoundedOptions& opts) {
  return BoundedPlan(f, p, opts).eval(m, env);
}

Formula compile_fo(const Formula& f, const DecisivePair& p, const CompileOptions& opts) {
  if (!is_decisive(f, p, opts.bounded)) throw PreconditionError("pair is not decisive for " + to_string(f));
  Compiler c(opts);
  return c.compile(f, p.a, p.e);
}

DecisivePair atom_pair() { return {Fragment::star(), Fragment::star()}; }

DecisivePair negation_pair(const DecisivePair& child) { return {Fragment::fn_below(child.a, child.e), child.a}; }

DecisivePair conjunction_pair(const std::vector<std::pair<Nat, DecisivePair>>& parts) {
  std::vector<Fragment::Component> as, es;
  for (const auto& [i, p] : parts) {
    as.emplace_back(i, p.a);
    es.emplace_back(i, p.e);
  }
  return {Fragment::index_map(std::move(as)), Fragment::component_set(std::move(es))};
}

DecisivePair canonical_pair(const Formula& f, const DomainFn& domain) {
  std::vector<Level> path;
  return canonical_rec(f, domain, path, false);
}

DecisivePair fo_decisive_pair(const Formula& f, std::size_t cap) {
  if (!is_first_order(f)) throw PreconditionError("not first-order: " + to_string(f));
  DecisivePair p = canonical_pair(f, [](const std::vector<Level>&, bool) -> std::vector<Nat> {
    throw PreconditionError("countable conjunction in a first-order formula");
  });
  try {
    return {expand(FragmentKind::of(Role::Forall, f), p.a, cap), expand(FragmentKind::of(Role::Exists, f), p.e, cap)};
  } catch (const BoundTooLarge&) {
    return p;
  }
}

}  // namespace boundsem
