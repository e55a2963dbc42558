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

#include "fragment_laws.hpp"

#include <algorithm>

namespace boundsem::testing {

void LawReport::check(bool ok, const std::string& what) {
  ++checks;
  if (ok) return;
  ++violations;
  if (examples.size() < 5) examples.push_back(what);
}

void LawReport::merge(const LawReport& o) {
  checks += o.checks;
  violations += o.violations;
  skipped += o.skipped;
  for (const auto& e : o.examples)
    if (examples.size() < 5) examples.push_back(e);
}

std::string LawReport::summary() const {
  std::string s = name + ": " + std::to_string(checks) + " checks, " + std::to_string(violations) + " violations";
  if (skipped) s += ", " + std::to_string(skipped) + " skipped";
  for (const auto& e : examples) s += "\n    " + e;
  return s;
}

namespace {

std::vector<Fragment> sample(Rng& rng, const std::vector<Fragment>& pool, std::size_t n) {
  if (pool.size() <= n) return pool;
  std::vector<Fragment> out = pool;
  std::shuffle(out.begin(), out.end(), rng);
  out.resize(n);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::vector<Fragment>> below_or_skip(const FragmentKind& kind, const Fragment& f, std::size_t cap) {
  try {
    return enumerate_below(kind, f, cap);
  } catch (const BoundTooLarge&) {
    return std::nullopt;
  }
}

std::string enc(const Fragment& f) { return encode(f); }

}  // namespace

LawReport order_laws(const FragmentKind& kind, const std::vector<Fragment>& all) {
  LawReport r{"order laws " + to_string(kind)};
  Rng rng(all.size());
  std::vector<Fragment> pool = sample(rng, all, 250);
  const std::size_t n = pool.size();
  std::vector<std::vector<char>> S(n, std::vector<char>(n)), L(n, std::vector<char>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      S[i][j] = subseteq(kind, pool[i], pool[j]);
      L[i][j] = leq(kind, pool[i], pool[j]);
    }
  for (std::size_t i = 0; i < n; ++i) {
    r.check(S[i][i], "⊆ not reflexive at " + enc(pool[i]));
    r.check(L[i][i], "<= not reflexive at " + enc(pool[i]));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && L[i][j] && L[j][i]) r.check(false, "<= not antisymmetric: " + enc(pool[i]) + " / " + enc(pool[j]));
      else if (i < j) r.check(true, "");
      for (std::size_t k = 0; k < n; ++k) {
        if (S[i][j] && S[j][k]) r.check(S[i][k], "⊆ not transitive via " + enc(pool[j]));
        if (L[i][j] && L[j][k]) r.check(L[i][k], "<= not transitive via " + enc(pool[j]));
      }
    }
  return r;
}

LawReport F_downward_closed(const FragmentKind& kind, const std::vector<Fragment>& all) {
  LawReport r{"F downward closed " + to_string(kind)};
  Rng rng(all.size() + 1);
  std::vector<Fragment> pool = sample(rng, all, 400);
  std::vector<char> inF;
  for (const auto& f : pool) inF.push_back(in_F(kind, f));
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!inF[i]) continue;
    for (std::size_t j = 0; j < pool.size(); ++j)
      if (subseteq(kind, pool[j], pool[i]))
        r.check(inF[j], enc(pool[j]) + " ⊆ " + enc(pool[i]) + " but not in F");
  }
  return r;
}

LawReport below_exact(const FragmentKind& kind, const std::vector<Fragment>& pool, const std::vector<Fragment>& cands) {
  LawReport r{"enumerate_below exact " + to_string(kind)};
  std::vector<Fragment> valid;
  for (const auto& c : cands)
    if (is_valid(kind, c)) valid.push_back(c);
  for (const auto& f : pool) {
    auto got = enumerate_below(kind, f);
    std::vector<Fragment> want;
    for (const auto& c : valid)
      if (leq(kind, c, f)) want.push_back(c);
    r.check(got == want, "below(" + enc(f) + "): got " + std::to_string(got.size()) + ", oracle " +
                             std::to_string(want.size()));
  }
  return r;
}

LawReport min_laws(Rng& rng, const FragmentKind& kind, const std::vector<Fragment>& pool, std::size_t max_pairs) {
  LawReport r{"min laws " + to_string(kind)};
  for (const auto& f : pool) {
    auto B = below_or_skip(kind, f, 512);
    if (!B) {
      ++r.skipped;
      continue;
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < B->size(); ++i)
      for (std::size_t j = 0; j < B->size(); ++j) pairs.emplace_back(i, j);
    if (pairs.size() > max_pairs) {
      std::shuffle(pairs.begin(), pairs.end(), rng);
      pairs.resize(max_pairs);
    }
    const bool fF = in_F(kind, f);
    for (auto [i, j] : pairs) {
      const Fragment& g0 = (*B)[i];
      const Fragment& g1 = (*B)[j];
      std::string ctx = " for f=" + enc(f) + " g0=" + enc(g0) + " g1=" + enc(g1);
      Fragment m = min3(kind, f, g0, g1);
      r.check(is_valid(kind, m), "(1) min invalid" + ctx);
      r.check(leq(kind, m, g0), "(2) min not <= g0" + ctx);
      r.check(leq(kind, m, g1), "(3) min not <= g1" + ctx);
      bool glb = std::binary_search(B->begin(), B->end(), m);
      for (const auto& h : *B)
        if (leq(kind, h, g0) && leq(kind, h, g1) && !leq(kind, h, m)) glb = false;
      r.check(glb, "(4) min is not the glb" + ctx);

      Fragment f1 = shrink_sub(rng, kind, f);
      Fragment a0 = restrict(kind, f, g0, f1), a1 = restrict(kind, f, g1, f1);
      r.check(subseteq(kind, min3(kind, f1, a0, a1), m), "(5) min not ⊆-monotone" + ctx);

      const Fragment& f2 = (*B)[pick(rng, B->size())];
      Fragment b0 = min3(kind, f, g0, f2), b1 = min3(kind, f, g1, f2);
      r.check(leq(kind, min3(kind, f2, b0, b1), m), "(6) min not <=-monotone" + ctx);

      if (fF && in_F(kind, g0) && in_F(kind, g1)) r.check(in_F(kind, m), "F not closed under min" + ctx);
    }
  }
  return r;
}

LawReport restrict_laws(Rng& rng, const FragmentKind& kind, const std::vector<Fragment>& pool, std::size_t max_per_f) {
  LawReport r{"restrict laws " + to_string(kind)};
  for (const auto& f : pool) {
    auto B = below_or_skip(kind, f, 512);
    if (!B) {
      ++r.skipped;
      continue;
    }
    std::vector<Fragment> S;
    for (const auto& s : pool)
      if (subseteq(kind, s, f)) S.push_back(s);
    for (int t = 0; t < 3; ++t) S.push_back(shrink_sub(rng, kind, f));
    std::sort(S.begin(), S.end());
    S.erase(std::unique(S.begin(), S.end()), S.end());
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < B->size(); ++i)
      for (std::size_t j = 0; j < S.size(); ++j) pairs.emplace_back(i, j);
    if (pairs.size() > max_per_f) {
      std::shuffle(pairs.begin(), pairs.end(), rng);
      pairs.resize(max_per_f);
    }
    for (auto [i, j] : pairs) {
      const Fragment& f2 = (*B)[i];
      const Fragment& fs = S[j];
      std::string ctx = " for f=" + enc(f) + " f'=" + enc(f2) + " f*=" + enc(fs);
      Fragment x = restrict(kind, f, f2, fs);
      r.check(is_valid(kind, x), "(1) restriction invalid" + ctx);
      r.check(leq(kind, x, fs), "(2) restriction not <= f*" + ctx);
      r.check(subseteq(kind, x, f2), "(3) restriction not ⊆ f'" + ctx);
      if (auto Bs = below_or_skip(kind, fs, 4096)) {
        std::vector<Fragment> hits;
        for (const auto& g : *Bs)
          if (subseteq(kind, g, f2)) hits.push_back(g);
        r.check(hits.size() == 1 && hits[0] == x, "(4) restriction not unique (" + std::to_string(hits.size()) + ")" + ctx);
      } else {
        ++r.skipped;
      }

      Fragment g = shrink_sub(rng, kind, f);
      Fragment g2 = restrict(kind, f, f2, g);
      std::vector<Fragment> gs;
      for (const auto& s : S)
        if (subseteq(kind, s, g) && subseteq(kind, s, fs)) gs.push_back(s);
      if (gs.empty()) {
        ++r.skipped;
      } else {
        const Fragment& gstar = gs[pick(rng, gs.size())];
        r.check(subseteq(kind, restrict(kind, g, g2, gstar), x), "(5) restriction not ⊆-monotone" + ctx);
      }

      const Fragment& h = (*B)[pick(rng, B->size())];
      Fragment h2 = min3(kind, f, f2, h);
      Fragment hs = restrict(kind, f, h, fs);
      r.check(leq(kind, restrict(kind, h, h2, hs), x), "(6) restriction not <=-monotone" + ctx);

      std::vector<Fragment> inner;
      for (const auto& s : S)
        if (subseteq(kind, s, fs)) inner.push_back(s);
      const Fragment& hh = inner[pick(rng, inner.size())];
      r.check(restrict(kind, fs, x, hh) == restrict(kind, f, f2, hh), "restriction does not compose" + ctx);

      if (in_F(kind, f) && in_F(kind, f2) && in_F(kind, fs))
        r.check(in_F(kind, x), "F not closed under restriction" + ctx);
    }
  }
  return r;
}

LawReport coherence_laws(Rng& rng, const FragmentKind& kind, int budget, std::size_t families) {
  LawReport r{"coherence/union laws " + to_string(kind)};
  for (std::size_t t = 0; t < families; ++t) {
    Fragment base = random_F(rng, kind, budget);
    std::vector<Fragment> fam;
    std::size_t n = 1 + pick(rng, 3);
    for (std::size_t k = 0; k < n; ++k) fam.push_back(shrink_sub(rng, kind, base));
    if (coin(rng)) fam.push_back(base);
    std::string ctx = " base=" + enc(base);

    auto w = is_coherent(kind, fam);
    r.check(w.coherent, "⊆-shrinks of an F element are incoherent" + ctx);
    try {
      r.check(literal_coherent(kind, fam) == w.coherent, "pairwise and literal coherence disagree" + ctx);
    } catch (const Error&) {
      ++r.skipped;
    }
    if (!w) continue;

    for (std::size_t drop = 0; drop < fam.size(); ++drop) {
      std::vector<Fragment> sub = fam;
      sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
      r.check(is_coherent(kind, sub).coherent, "subset of a coherent set is incoherent" + ctx);
    }
    Fragment u = union_coherent(kind, fam);
    r.check(is_valid(kind, u), "union invalid" + ctx);
    r.check(in_F(kind, u), "union of F elements not in F" + ctx);
    for (const auto& f : fam) {
      r.check(subseteq(kind, f, u), "union is not an upper bound" + ctx);
      r.check(union_coherent(kind, {f}) == f, "union of {f} differs from f: " + enc(f));
    }

    std::vector<Fragment> G;
    for (const auto& f : fam) G.push_back(shrink_sub(rng, kind, f));
    bool gc = is_coherent(kind, G).coherent;
    r.check(gc, "σ-image family incoherent" + ctx);
    if (gc) r.check(subseteq(kind, union_coherent(kind, G), u), "σ clause: union not ⊆-monotone" + ctx);

    if (auto Bu = below_or_skip(kind, u, 2048)) {
      const Fragment& u2 = (*Bu)[pick(rng, Bu->size())];
      std::vector<Fragment> H;
      for (const auto& f : fam) H.push_back(restrict(kind, u, u2, f));
      if (is_coherent(kind, H).coherent) {
        r.check(leq(kind, union_coherent(kind, H), u), "π clause: union not <=-monotone" + ctx);
      } else {
        ++r.skipped;
      }
    } else {
      ++r.skipped;
    }

    // unrelated pair: the witness must really fail the definition
    std::vector<Fragment> pair{random_valid(rng, kind, budget), random_valid(rng, kind, budget)};
    auto pw = is_coherent(kind, pair);
    try {
      r.check(literal_coherent(kind, pair) == pw.coherent, "pairwise and literal coherence disagree on a random pair");
      if (!pw) r.check(!literal_coherent(kind, pw.offending), "coherence witness is coherent");
    } catch (const Error&) {
      ++r.skipped;
    }
  }
  return r;
}

LawReport tilde_laws(Rng& rng, const FragmentKind& kind, int budget, std::size_t samples) {
  LawReport r{"tilde laws " + to_string(kind)};
  FragmentKind kk = kind.key();
  for (std::size_t t = 0; t < samples; ++t) {
    Fragment f = random_F(rng, kind, budget);
    std::string ctx = " f=" + enc(f);
    Fragment tf = tilde(kind, f);
    r.check(subseteq(kind, f, tf), "f ⊄ tilde f" + ctx);
    r.check(is_valid(kind, tf), "tilde f invalid" + ctx);
    r.check(in_F(kind, tf), "tilde f not in F" + ctx);
    r.check(tilde(kind, tf) == tf, "tilde not idempotent" + ctx);
    const auto& es = tf.entries();
    for (std::size_t i = 0; i < es.size(); ++i)
      for (std::size_t j = i + 1; j < es.size(); ++j)
        if (coherent_pair(kk, es[i].first, es[j].first))
          r.check(tf.find(union_coherent(kk, {es[i].first, es[j].first})) != nullptr,
                  "tilde domain not closed under unions" + ctx);
    Fragment g = shrink_sub(rng, kind, f);
    r.check(subseteq(kind, tilde(kind, g), tf), "tilde not ⊆-monotone" + ctx);
    Fragment h = shrink_le(rng, kind, f);
    if (in_F(kind, h)) r.check(leq(kind, tilde(kind, h), tf), "tilde not <=-monotone" + ctx + " h=" + enc(h));
    else ++r.skipped;
  }
  return r;
}

LawReport extension_laws(Rng& rng, const FragmentKind& kind, int budget, std::size_t instances,
                         std::size_t* searched) {
  LawReport r{"coherent extension " + to_string(kind)};
  std::size_t made = 0, attempts = 0, search_count = 0;
  while (made < instances && attempts < instances * 50) {
    ++attempts;
    Fragment f = random_F(rng, kind, budget);
    Fragment g = shrink_sub(rng, kind, f);
    auto Bg = below_or_skip(kind, g, 256);
    auto Bf = below_or_skip(kind, f, 256);
    if (!Bg || !Bf) continue;
    std::vector<Fragment> g2s;
    for (const auto& x : *Bg)
      if (in_F(kind, x)) g2s.push_back(x);
    if (g2s.empty()) continue;
    const Fragment& g2 = g2s[pick(rng, g2s.size())];
    std::vector<Fragment> ks;
    for (const auto& k : *Bf)
      if (in_F(kind, k) && leq(kind, restrict(kind, f, k, g), g2)) ks.push_back(k);
    std::shuffle(ks.begin(), ks.end(), rng);
    ks.resize(std::min<std::size_t>(ks.size(), pick(rng, 4)));
    ++made;
    std::string ctx = " f=" + enc(f) + " g=" + enc(g) + " g'=" + enc(g2) + " |K|=" + std::to_string(ks.size());
    try {
      ExtensionStats stats;
      Fragment x = coherent_extension(kind, f, g, g2, ks, &stats);
      if (stats.searched) ++search_count;
      bool ok = is_valid(kind, x) && in_F(kind, x) && leq(kind, x, f) && subseteq(kind, g2, x);
      for (const auto& k : ks) ok = ok && leq(kind, k, x);
      r.check(ok, "postcondition fails" + ctx);
    } catch (const PreconditionError& e) {
      r.check(false, std::string("no extension: ") + e.what() + ctx);
    }
  }
  if (made < instances) r.check(false, "generated only " + std::to_string(made) + " instances");
  if (searched) *searched += search_count;
  return r;
}

}  // namespace boundsem::testing
