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

#include "generators.hpp"

namespace boundsem::testing {

Signature random_signature() {
  Signature sig;
  sig.predicate("P", 1).predicate("R", 2).predicate("D", 2, true);
  sig.constant("a").constant("c", true);
  sig.function("f", 1).function("g", 1, true).function("h", 2);
  return sig;
}

namespace {

struct Ctx {
  std::vector<std::string> vars;
  std::vector<std::string> metas;
};

IndexExpr random_index(Rng& rng, const Ctx& ctx, int depth) {
  std::size_t choice = pick(rng, depth > 0 ? 5 : 2);
  if (choice == 1 && !ctx.metas.empty()) return IndexExpr::var(ctx.metas[pick(rng, ctx.metas.size())]);
  if (choice <= 1) return IndexExpr::lit(pick(rng, 12));
  IndexExpr a = random_index(rng, ctx, depth - 1);
  IndexExpr b = random_index(rng, ctx, depth - 1);
  if (choice == 2) return IndexExpr::add(a, b);
  if (choice == 3) return IndexExpr::mul(a, b);
  return IndexExpr::max(a, b);
}

Term random_term(Rng& rng, const Ctx& ctx, int depth) {
  std::size_t choice = pick(rng, depth > 0 ? 6 : 3);
  switch (choice) {
    case 0:
      if (!ctx.vars.empty()) return Term::variable(ctx.vars[pick(rng, ctx.vars.size())]);
      [[fallthrough]];
    case 1: return Term::constant("a");
    case 2: return Term::constant("c", random_index(rng, ctx, 1));
    case 3: {
      std::optional<IndexExpr> iter;
      if (coin(rng)) iter = random_index(rng, ctx, 1);
      return Term::apply("f", {random_term(rng, ctx, depth - 1)}, std::nullopt, iter);
    }
    case 4: return Term::apply("g", {random_term(rng, ctx, depth - 1)}, random_index(rng, ctx, 1));
    default:
      return Term::apply("h", {random_term(rng, ctx, depth - 1), random_term(rng, ctx, depth - 1)});
  }
}

Formula random_atom(Rng& rng, const Ctx& ctx) {
  switch (pick(rng, 3)) {
    case 0: return Formula::atomic("P", {random_term(rng, ctx, 2)});
    case 1: return Formula::atomic("R", {random_term(rng, ctx, 1), random_term(rng, ctx, 1)});
    default:
      return Formula::atomic("D", {random_term(rng, ctx, 1), random_term(rng, ctx, 1)}, random_index(rng, ctx, 2));
  }
}

Formula random_node(Rng& rng, Ctx& ctx, int depth) {
  if (depth <= 0 || pick(rng, 6) == 0) return random_atom(rng, ctx);
  static const char* const kVars[] = {"x", "y", "z"};
  static const char* const kMetas[] = {"n", "m", "k"};
  switch (pick(rng, 6)) {
    case 0: return Formula::negation(random_node(rng, ctx, depth - 1));
    case 1: {
      std::string v = kVars[pick(rng, 3)];
      ctx.vars.push_back(v);
      Formula body = random_node(rng, ctx, depth - 1);
      ctx.vars.pop_back();
      return Formula::forall(v, body);
    }
    case 2:
    case 3: {
      std::string mv = kMetas[pick(rng, 3)];
      ctx.metas.push_back(mv);
      Formula body = random_node(rng, ctx, depth - 1);
      ctx.metas.pop_back();
      return Formula::big_and(coin(rng, 0.7) ? IndexSet::Nat : IndexSet::Pair, mv, body);
    }
    default: {
      std::vector<Formula> parts;
      std::size_t n = pick(rng, 4);
      for (std::size_t i = 0; i < n; ++i) parts.push_back(random_node(rng, ctx, depth - 1));
      return Formula::conjunction(std::move(parts));
    }
  }
}

}  // namespace

Formula random_formula(Rng& rng, int depth) {
  Ctx ctx;
  return random_node(rng, ctx, depth);
}

namespace {

Term random_fo_term(Rng& rng, const std::vector<std::string>& vars, int depth) {
  std::size_t choice = pick(rng, depth > 0 ? 5 : 3);
  switch (choice) {
    case 0:
      if (!vars.empty()) return Term::variable(vars[pick(rng, vars.size())]);
      [[fallthrough]];
    case 1: return Term::constant("a");
    case 2: return Term::constant("c", IndexExpr::lit(pick(rng, 6)));
    case 3: return Term::apply("f", {random_fo_term(rng, vars, depth - 1)});
    default:
      return Term::apply("h", {random_fo_term(rng, vars, depth - 1), random_fo_term(rng, vars, depth - 1)});
  }
}

Formula random_fo_node(Rng& rng, std::vector<std::string>& vars, int depth) {
  if (depth <= 0 || pick(rng, 5) == 0) {
    switch (pick(rng, 3)) {
      case 0: return Formula::atomic("P", {random_fo_term(rng, vars, 1)});
      case 1: return Formula::atomic("R", {random_fo_term(rng, vars, 1), random_fo_term(rng, vars, 1)});
      default:
        return Formula::atomic("D", {random_fo_term(rng, vars, 1), random_fo_term(rng, vars, 1)},
                               IndexExpr::lit(pick(rng, 4)));
    }
  }
  static const char* const kVars[] = {"x", "y", "z"};
  switch (pick(rng, 4)) {
    case 0: return Formula::negation(random_fo_node(rng, vars, depth - 1));
    case 1: {
      std::string v = kVars[pick(rng, 3)];
      vars.push_back(v);
      Formula body = random_fo_node(rng, vars, depth - 1);
      vars.pop_back();
      return Formula::forall(v, body);
    }
    case 2: {
      std::vector<Formula> parts;
      std::size_t n = pick(rng, 3) + 1;
      for (std::size_t i = 0; i < n; ++i) parts.push_back(random_fo_node(rng, vars, depth - 1));
      return Formula::conjunction(std::move(parts));
    }
    default:
      return Formula::big_and(IndexSet::Pair, "i",
                              Formula::atomic("D", {random_fo_term(rng, vars, 1), random_fo_term(rng, vars, 1)},
                                              IndexExpr::add(IndexExpr::var("i"), IndexExpr::lit(1))));
  }
}

}  // namespace

Formula random_first_order(Rng& rng, int depth, const std::vector<std::string>& free) {
  std::vector<std::string> vars = free;
  return random_fo_node(rng, vars, depth);
}

Structure random_structure(Rng& rng, std::size_t size) {
  Structure m(size, "random-" + std::to_string(size));
  std::vector<std::vector<Element>> p, r;
  for (Element x = 0; x < size; ++x) {
    if (coin(rng)) p.push_back({x});
    for (Element y = 0; y < size; ++y)
      if (coin(rng)) r.push_back({x, y});
  }
  m.add_relation("P", std::nullopt, 1, p);
  m.add_relation("R", std::nullopt, 2, r);
  m.set_constant("a", std::nullopt, static_cast<Element>(pick(rng, size)));
  std::vector<Element> f(size), h(size * size);
  for (auto& v : f) v = static_cast<Element>(pick(rng, size));
  for (auto& v : h) v = static_cast<Element>(pick(rng, size));
  m.set_function("f", std::nullopt, 1, f);
  m.set_function("h", std::nullopt, 2, h);
  std::vector<std::vector<Rational>> d(size, std::vector<Rational>(size, Rational(0)));
  for (std::size_t x = 0; x < size; ++x)
    for (std::size_t y = 0; y < x; ++y) d[x][y] = d[y][x] = Rational(static_cast<std::int64_t>(pick(rng, 5)), 4);
  m.set_distance_rule("D", DistanceMatrix(d));
  SequenceRule seq;
  std::size_t len = pick(rng, 4) + 1;
  for (std::size_t i = 0; i < len; ++i) seq.prefix.push_back(static_cast<Element>(pick(rng, size)));
  seq.tail = SequenceRule::Tail::Periodic;
  seq.param = pick(rng, len) + 1;
  m.set_sequence_rule("c", seq);
  return m;
}

std::vector<Env> all_envs(std::size_t size, const std::vector<std::string>& vars) {
  std::vector<Env> out;
  std::vector<Element> cur(vars.size(), 0);
  while (true) {
    Env env;
    for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = cur[i];
    out.push_back(std::move(env));
    std::size_t k = vars.size();
    while (k > 0 && ++cur[k - 1] == size) cur[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

}  // namespace boundsem::testing
