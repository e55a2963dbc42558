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

// Acceptance run: one PASS/FAIL line per criterion. Sample sizes, seeds and
// time limits are fixed below; the exit status is nonzero if any line fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "boundsem/bounds.hpp"
#include "boundsem/family.hpp"
#include "boundsem/parser.hpp"
#include "bounded_gen.hpp"
#include "collapse.hpp"
#include "fragment_laws.hpp"

namespace boundsem {
namespace {

using testing::LawReport;
using testing::Rng;

// Time limits in seconds.
constexpr double kLimitFragments = 120;
constexpr double kLimitCompile = 300;
constexpr double kLimitMetastable = 60;

// Sample sizes.
constexpr std::size_t kDeeperFragments = 1000;
constexpr std::size_t kCoherentFamilies = 500;
constexpr std::size_t kTildeSamples = 200;
constexpr std::size_t kExtensionInstances = 100;
constexpr std::size_t kStabilityInstances = 300;
constexpr std::size_t kCompileInstances = 500;
constexpr std::size_t kCompileStructures = 50;
constexpr std::size_t kMaxUniverse = 4;
constexpr Nat kCollapseCap = 4;
constexpr std::size_t kCollapseFns = 10;
constexpr std::size_t kCollapseStructures = 20;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

void absorb(Outcome& out, LawReport& total, const LawReport& r) {
  total.merge(r);
  if (!r.ok()) {
    out.pass = false;
    out.detail += "\n    " + r.summary();
  }
}

std::vector<FragmentKind> benchmark_kinds() {
  std::vector<FragmentKind> out;
  for (const Formula& f : {testing::benchmark_fo(), testing::benchmark_pi2(), testing::benchmark_pi3()})
    for (const auto& k : testing::reachable_kinds(f))
      if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  return out;
}

std::vector<FragmentKind> top_kinds() {
  std::vector<FragmentKind> out;
  for (const Formula& f : {testing::benchmark_fo(), testing::benchmark_pi2(), testing::benchmark_pi3()})
    for (Role r : {Role::Forall, Role::Exists}) out.push_back(FragmentKind::of(r, f));
  return out;
}

// 1. Orders, F, min and restriction on exhaustive depth-2 pools and on
// random fragments outside them.
Outcome fragment_algebra() {
  Outcome out;
  Rng rng(0xacc1);
  LawReport total{"fragment algebra"};
  for (const auto& k : benchmark_kinds()) {
    auto pool = testing::valid_pool(k, 2);
    absorb(out, total, testing::order_laws(k, pool));
    absorb(out, total, testing::F_downward_closed(k, pool));
    absorb(out, total, testing::min_laws(rng, k, pool, 40));
    absorb(out, total, testing::restrict_laws(rng, k, pool, 40));
  }
  // deeper: random valid fragments that are not in the depth-2 enumeration
  std::size_t deeper = 0;
  for (const auto& k : top_kinds()) {
    std::set<std::string> shallow;
    for (const auto& f : testing::candidates(k, 2)) shallow.insert(encode(f));
    std::vector<Fragment> pool;
    std::set<std::string> seen;
    for (int t = 0; t < 6000 && pool.size() < kDeeperFragments / 4 + 1; ++t) {
      Fragment f = testing::random_valid(rng, k, 4);
      std::string s = encode(f);
      if (shallow.count(s) || !seen.insert(s).second) continue;
      pool.push_back(std::move(f));
    }
    if (pool.empty()) continue;
    deeper += pool.size();
    absorb(out, total, testing::order_laws(k, pool));
    absorb(out, total, testing::F_downward_closed(k, pool));
    absorb(out, total, testing::min_laws(rng, k, pool, 6));
    absorb(out, total, testing::restrict_laws(rng, k, pool, 6));
  }
  if (deeper < kDeeperFragments) {
    out.pass = false;
    out.detail += "\n    only " + std::to_string(deeper) + " deeper fragments";
  }
  out.detail = std::to_string(deeper) + " deeper fragments, " + std::to_string(total.checks) + " checks, " +
               std::to_string(total.violations) + " violations, " + std::to_string(total.skipped) + " skipped" +
               out.detail;
  return out;
}

// 2. enumerate_below against the brute-force filter.
Outcome below_exactness() {
  Outcome out;
  LawReport total{"below"};
  for (const auto& k : benchmark_kinds()) {
    auto pool = testing::valid_pool(k, 2);
    absorb(out, total, testing::below_exact(k, pool, testing::candidates(k, 2)));
  }
  Formula f = parse_formula("/\\{n in N} P(c_n)", testing::random_signature());
  FragmentKind all = FragmentKind::of(Role::Forall, f);
  std::size_t n = enumerate_below(all, decode("(imap (0 *) (1 *) (2 *))")).size();
  if (n != 8) {
    out.pass = false;
    out.detail += "\n    IndexMap dom{0,1,2}: " + std::to_string(n) + " below, expected 8";
  }
  out.detail = std::to_string(total.checks) + " fragments compared, " + std::to_string(total.violations) +
               " violations, dom{0,1,2} count " + std::to_string(n) + out.detail;
  return out;
}

// 3. Coherence, union, tilde and coherent extension.
Outcome coherence() {
  Outcome out;
  Rng rng(0xacc3);
  LawReport total{"coherence"};
  auto kinds = benchmark_kinds();
  std::vector<FragmentKind> maps;
  for (const auto& k : kinds)
    if (k.tag() == Fragment::Tag::FnMap) maps.push_back(k);
  auto share = [](std::size_t want, std::size_t parts) { return (want + parts - 1) / parts; };
  std::size_t families = 0, tildes = 0, extensions = 0, searched = 0;
  for (const auto& k : kinds) {
    std::size_t n = share(kCoherentFamilies, kinds.size());
    absorb(out, total, testing::coherence_laws(rng, k, 4, n));
    families += n;
  }
  for (const auto& k : maps) {
    std::size_t n = share(kTildeSamples, maps.size());
    absorb(out, total, testing::tilde_laws(rng, k, 4, n));
    tildes += n;
    std::size_t e = share(kExtensionInstances, maps.size());
    absorb(out, total, testing::extension_laws(rng, k, 4, e, &searched));
    extensions += e;
  }
  out.detail = std::to_string(families) + " families, " + std::to_string(tildes) + " tilde samples, " +
               std::to_string(extensions) + " extension instances (" + std::to_string(searched) + " searched), " +
               std::to_string(total.checks) + " checks, " + std::to_string(total.violations) + " violations" + out.detail;
  return out;
}

// 4. Downward/upward stability and coherent agreement.
Outcome decisiveness() {
  Outcome out;
  Rng rng(0xacc4);
  auto pool = testing::decisive_instances(rng, 200);
  std::ostringstream os;
  for (auto* law : {&testing::downward_stability, &testing::upward_stability, &testing::coherent_agreement}) {
    LawReport r = (*law)(rng, pool, kStabilityInstances);
    if (!r.ok() || r.checks < kStabilityInstances) {
      out.pass = false;
      out.detail += "\n    " + r.summary();
    }
    os << r.checks << "/" << r.violations << " ";
  }
  out.detail = "instances/violations per law: " + os.str() + out.detail;
  return out;
}

// 5. compile_fo against eval_bounded.
Outcome compiler() {
  Outcome out;
  Rng rng(0xacc5);
  auto pool = testing::decisive_instances(rng, kCompileInstances);
  std::size_t bench[3] = {0, 0, 0};
  const Formula benches[3] = {testing::benchmark_fo(), testing::benchmark_pi2(), testing::benchmark_pi3()};
  for (int b = 0; b < 3; ++b)
    for (int t = 0; t < 10; ++t) {
      DecisivePair p = testing::random_canonical(rng, benches[b], 3);
      if (is_decisive(benches[b], p)) pool.push_back({benches[b], p, {}});
    }
  std::size_t mismatches = 0, instances = 0;
  for (const auto& inst : pool) {
    for (int b = 0; b < 3; ++b) bench[b] += inst.f == benches[b];
    Formula c = compile_fo(inst.f, inst.p);
    BoundedPlan plan(inst.f, inst.p);
    std::string why;
    ++instances;
    bool ok = is_first_order(c) &&
              testing::agree_on_structures(
                  rng, inst, [&](const Structure& m, const Env& env) { return plan.eval(m, env); },
                  [&](const Structure& m, const Env& env) { return eval_fo(m, c, env); }, kCompileStructures,
                  kMaxUniverse, &why);
    if (!ok) {
      if (mismatches++ == 0) out.detail += "\n    " + why;
      out.pass = false;
    }
  }
  for (int b = 0; b < 3; ++b)
    if (bench[b] == 0) out.pass = false;
  if (instances < kCompileInstances) out.pass = false;
  out.detail = std::to_string(instances) + " instances (benchmarks " + std::to_string(bench[0]) + "/" +
               std::to_string(bench[1]) + "/" + std::to_string(bench[2]) + ") x " +
               std::to_string(kCompileStructures) + " structures, " + std::to_string(mismatches) + " mismatches" +
               out.detail;
  return out;
}

// 6. fragment_of against the quantifier-bounded reading.
Outcome collapse() {
  Outcome out;
  Rng rng(0xacc6);
  testing::CollapseReport r = testing::collapse_suite(rng, kCollapseCap, kCollapseFns, kCollapseStructures);
  out.pass = r.mismatches == 0 && r.not_decisive == 0 && r.true_checks > 0 && r.true_checks < r.checks;
  out.detail = std::to_string(r.pairs) + " pairs, " + std::to_string(r.checks) + " checks (" +
               std::to_string(r.true_checks) + " true), " + std::to_string(r.mismatches) + " mismatches, " +
               std::to_string(r.not_decisive) + " non-decisive";
  for (const auto& e : r.examples) out.detail += "\n    " + e;
  return out;
}

// c_k of the i-th delayed-alternation space, from its definition.
Element alternating_c(Nat i, Nat k) { return (k < i || k % 2 == 0) ? 1 : 0; }

// 7. The metastability example.
Outcome metastability() {
  Outcome out;
  const Nat prefix = 40;
  const std::size_t tail = 20;
  const Nat cap = 30;
  FamilySpec fam = sequence_family(SequenceKind::DelayedAlternation, 0, prefix - 1, tail);
  auto fail = [&](const std::string& why) {
    out.pass = false;
    out.detail += "\n    " + why;
  };

  // (a) every space is a genuine non-convergent sequence
  std::size_t witnessed = 0;
  for (Nat i = 0; i < prefix; ++i) {
    const Structure& s = fam.structures[i];
    const SequenceRule& c = *s.sequence_rule("c");
    const DistanceMatrix& d = *s.distance_rule("D");
    for (Nat k = 0; k <= 2 * i + 4; ++k)
      if (c.at(k) != alternating_c(i, k)) fail("space " + std::to_string(i) + " has the wrong c_" + std::to_string(k));
    for (Nat m = 0; m <= 2 * i + 2; ++m) {
      bool found = false;
      for (Nat k = m + 1; k <= 2 * i + 4 && !found; ++k) found = !(d.at(c.at(m), c.at(k)) < Rational(1));
      if (!found) fail("space " + std::to_string(i) + " settles after m=" + std::to_string(m));
      witnessed += found;
    }
  }

  // (b) and (c)
  const std::vector<MonotoneFn> Fs = {
      lookahead(MonotoneFn::constant(1), 64),  lookahead(MonotoneFn::constant(2), 64),
      MonotoneFn::constant(1),                 MonotoneFn::constant(3),
      MonotoneFn::constant(19),                MonotoneFn::constant(2),
      parse_monotone("mono:0->5,3->9"),        parse_monotone("mono:0->11,1->40"),
      parse_monotone("mono:0->21,2->22"),      parse_monotone("mono:0->23,4->24"),
  };
  const Formula sentence = testing::benchmark_pi3();
  std::size_t runs = 0;
  std::ostringstream witnesses;
  for (Nat n : {1, 2, 4}) {
    Rational eps(1, static_cast<std::int64_t>(n));
    for (const auto& F : Fs) {
      ++runs;
      std::string ctx = "eps=" + to_string(eps) + " F=" + to_string(F);
      CheckReport meta = check_metastable(fam, eps, F, cap);
      // satisfaction sets from the definition
      for (Nat m = 0; m <= cap; ++m) {
        std::vector<std::size_t> want;
        for (Nat i = 0; i < prefix; ++i)
          if (alternating_c(i, m) == alternating_c(i, std::max(m, F(m)))) want.push_back(i);
        if (meta.candidates[m].sat != want) fail(ctx + ": sat set of m=" + std::to_string(m) + " is wrong");
      }
      if (!meta.winner) {
        fail(ctx + ": no winning m");
        continue;
      }
      Nat m = *meta.winner;
      if (m % 2 != 0) fail(ctx + ": winning m=" + std::to_string(m) + " is odd");
      std::vector<std::size_t> above;
      for (std::size_t i = F(m) + 1; i < prefix; ++i) above.push_back(i);
      const auto& sat = meta.candidates[m].sat;
      bool contains = std::includes(sat.begin(), sat.end(), above.begin(), above.end());
      bool exact = F(m) % 2 == 0 || sat == above;
      if (!contains || !exact) fail(ctx + ": tail of m=" + std::to_string(m) + " is not {i > F(m)}");
      if (n == 2) witnesses << m << " ";

      CheckReport via = check_family(fam, sentence, Bound::pair(n, {F}), cap);
      if (via.winner.has_value() != meta.winner.has_value()) fail(ctx + ": verdicts differ");
      else if (*via.winner != m) fail(ctx + ": family witness E=" + std::to_string(*via.winner));
      std::set<std::size_t> acc;
      for (Nat e = 0; e <= cap; ++e) {
        acc.insert(meta.candidates[e].sat.begin(), meta.candidates[e].sat.end());
        if (via.candidates[e].sat != std::vector<std::size_t>(acc.begin(), acc.end()))
          fail(ctx + ": family sat set for E=" + std::to_string(e) + " is not the union over m <= E");
      }
    }
  }
  out.detail = std::to_string(witnessed) + " non-convergence witnesses, " + std::to_string(runs) +
               " (eps, F) runs, winning m at eps=1/2: " + witnesses.str() + out.detail;
  return out;
}

// 8. Parity family: both checkers fail at every cap.
Outcome negative_control() {
  Outcome out;
  FamilySpec fam = sequence_family(SequenceKind::Parity, 0, 39, 20);
  MonotoneFn F = lookahead(MonotoneFn::constant(1), 64);
  const Formula sentence = testing::benchmark_pi3();
  std::size_t nonempty = 0;
  for (Nat cap = 0; cap <= 50; ++cap) {
    CheckReport meta = check_metastable(fam, Rational(1, 2), F, cap);
    CheckReport via = check_family(fam, sentence, Bound::pair(2, {F}), cap);
    if (meta.winner || via.winner) {
      out.pass = false;
      out.detail += "\n    cap " + std::to_string(cap) + " has a winner";
    }
    for (const auto* r : {&meta, &via})
      for (const auto& c : r->candidates) nonempty += !c.sat.empty();
  }
  if (nonempty) out.pass = false;
  out.detail = "caps 0..50, " + std::to_string(nonempty) + " non-empty satisfaction sets" + out.detail;
  return out;
}

}  // namespace
}  // namespace boundsem

int main() {
  using namespace boundsem;
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double limit;  // seconds; 0 = none
  };
  const Criterion criteria[] = {
      {1, "fragment algebra", fragment_algebra, kLimitFragments},
      {2, "enumerate_below exactness", below_exactness, 0},
      {3, "coherence, union, tilde, extension", coherence, 0},
      {4, "decisiveness stability", decisiveness, 0},
      {5, "compiler soundness", compiler, kLimitCompile},
      {6, "collapse equivalences", collapse, 0},
      {7, "metastability example", metastability, kLimitMetastable},
      {8, "parity negative control", negative_control, 0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Stopwatch sw;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double t = sw.seconds();
    bool in_time = c.limit == 0 || t <= c.limit;
    bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %d %-36s %s  %.1fs", c.id, c.name, pass ? "PASS" : "FAIL", t);
    if (c.limit > 0) std::printf(" (limit %.0fs)", c.limit);
    std::printf("  %s\n", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
