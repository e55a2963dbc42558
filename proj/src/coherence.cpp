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

// Coherence, unions, the tilde completion and coherent extension.

#include <algorithm>

#include "boundsem/fragment.hpp"
#include "fragment_internal.hpp"

namespace boundsem {

using detail::below_rec;
using detail::leq_rec;
using detail::lookup;
using detail::lookup_index;
using detail::materialize;
using detail::subseteq_rec;

namespace {

// Keys of several FnMaps merged up to representation, with the images each
// map assigns to them.
struct KeyImages {
  std::vector<Fragment> keys;
  std::vector<std::vector<Fragment>> images;

  void add(const FragmentKind& kk, const Fragment& key, const Fragment& image, std::size_t cap) {
    for (std::size_t i = 0; i < keys.size(); ++i)
      if (compare(keys[i], key) == 0 ||
          ((keys[i].contains_symbolic() || key.contains_symbolic()) && leq_rec(kk, keys[i], key, cap) &&
           leq_rec(kk, key, keys[i], cap))) {
        images[i].push_back(image);
        return;
      }
    keys.push_back(key);
    images.push_back({image});
  }
};

// {x, y} is coherent. Coherence of a finite set reduces to coherence of
// all its pairs and singletons, so this is the only primitive.
bool pair_rec(const FragmentKind& kind, const Fragment& x, const Fragment& y, std::size_t cap) {
  switch (kind.tag()) {
    case Fragment::Tag::Star:
      return true;
    case Fragment::Tag::IndexMap: {
      const auto& xs = x.components();
      const auto& ys = y.components();
      if (xs.size() != ys.size()) return false;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i].first != ys[i].first) return false;
        if (!pair_rec(kind.component(xs[i].first), xs[i].second, ys[i].second, cap)) return false;
      }
      return true;
    }
    case Fragment::Tag::ComponentSet: {
      for (const auto& [i, c] : x.components()) {
        const Fragment* d = y.component(i);
        if (!pair_rec(kind.component(i), c, d ? *d : c, cap)) return false;
      }
      for (const auto& [i, d] : y.components())
        if (!x.component(i) && !pair_rec(kind.component(i), d, d, cap)) return false;
      return true;
    }
    case Fragment::Tag::FnMap: {
      FragmentKind kk = kind.key(), vk = kind.value();
      KeyImages ki;
      Fragment X = materialize(kind, x, cap);
      for (const auto& [k, v] : X.entries()) ki.add(kk, k, v, cap);
      if (!x.same_node(y)) {
        Fragment Y = materialize(kind, y, cap);
        for (const auto& [k, v] : Y.entries()) ki.add(kk, k, v, cap);
      }
      const std::size_t n = ki.keys.size();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
          if (!pair_rec(kk, ki.keys[i], ki.keys[j], cap)) {
            if (i == j) return false;
            continue;
          }
          std::vector<const Fragment*> imgs;
          for (const auto& v : ki.images[i]) imgs.push_back(&v);
          if (j != i)
            for (const auto& v : ki.images[j]) imgs.push_back(&v);
          for (std::size_t p = 0; p < imgs.size(); ++p)
            for (std::size_t q = p; q < imgs.size(); ++q)
              if (!pair_rec(vk, *imgs[p], *imgs[q], cap)) return false;
        }
      return true;
    }
  }
  return false;
}

Fragment union_rec(const FragmentKind& kind, std::vector<Fragment> fs, std::size_t cap) {
  detail::sort_unique(fs);
  if (fs.size() == 1) return fs.front();
  switch (kind.tag()) {
    case Fragment::Tag::Star:
      return Fragment::star();
    case Fragment::Tag::IndexMap: {
      std::vector<Fragment::Component> cs;
      for (const auto& [i, c] : fs.front().components()) {
        std::vector<Fragment> parts;
        for (const auto& f : fs) parts.push_back(*f.component(i));
        cs.emplace_back(i, union_rec(kind.component(i), std::move(parts), cap));
      }
      return Fragment::index_map(std::move(cs));
    }
    case Fragment::Tag::ComponentSet: {
      std::vector<Nat> indices;
      for (const auto& f : fs)
        for (const auto& c : f.components()) indices.push_back(c.first);
      std::sort(indices.begin(), indices.end());
      indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
      std::vector<Fragment::Component> cs;
      for (Nat i : indices) {
        std::vector<Fragment> parts;
        for (const auto& f : fs)
          if (const Fragment* c = f.component(i)) parts.push_back(*c);
        cs.emplace_back(i, union_rec(kind.component(i), std::move(parts), cap));
      }
      return Fragment::component_set(std::move(cs));
    }
    case Fragment::Tag::FnMap: {
      FragmentKind kk = kind.key(), vk = kind.value();
      std::vector<Fragment> maps;
      KeyImages ki;
      for (const auto& f : fs) {
        maps.push_back(materialize(kind, f, cap));
        for (const auto& [k, v] : maps.back().entries()) ki.add(kk, k, v, cap);
      }
      std::vector<Fragment::Entry> es;
      for (const auto& a : ki.keys) {
        std::vector<Fragment> parts;
        for (const auto& h : maps)
          for (const auto& [b, v] : h.entries())
            if (subseteq_rec(kk, b, a, cap)) parts.push_back(v);
        es.emplace_back(a, union_rec(vk, std::move(parts), cap));
      }
      return Fragment::fn_map(std::move(es));
    }
  }
  return Fragment::star();
}

bool set_coherent(const FragmentKind& kind, const std::vector<Fragment>& fs, std::size_t cap) {
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i; j < fs.size(); ++j)
      if (!pair_rec(kind, fs[i], fs[j], cap)) return false;
  return true;
}

Fragment tilde_rec(const FragmentKind& kind, const Fragment& f, std::size_t cap) {
  FragmentKind kk = kind.key(), vk = kind.value();
  Fragment F = materialize(kind, f, cap);
  const auto& es = F.entries();
  const std::size_t n = es.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) adj[i][j] = adj[j][i] = pair_rec(kk, es[i].first, es[j].first, cap);

  std::vector<Fragment> unions;
  std::vector<std::size_t> clique;
  std::size_t count = 0;
  auto extend = [&](auto&& self, std::size_t from) -> void {
    for (std::size_t i = from; i < n; ++i) {
      if (!adj[i][i]) continue;
      bool ok = true;
      for (std::size_t c : clique) ok = ok && adj[c][i];
      if (!ok) continue;
      if (++count > cap) throw BoundTooLarge("tilde: more than " + std::to_string(cap) + " coherent key sets");
      clique.push_back(i);
      std::vector<Fragment> keys;
      for (std::size_t c : clique) keys.push_back(es[c].first);
      unions.push_back(union_rec(kk, std::move(keys), cap));
      self(self, i + 1);
      clique.pop_back();
    }
  };
  extend(extend, 0);
  detail::sort_unique(unions);

  std::vector<Fragment::Entry> out;
  for (auto& u : unions) {
    std::vector<Fragment> parts;
    for (const auto& [b, v] : es)
      if (subseteq_rec(kk, b, u, cap)) parts.push_back(v);
    if (!set_coherent(vk, parts, cap))
      throw PreconditionError("tilde: images below " + encode(u) + " are not coherent");
    Fragment value = union_rec(vk, std::move(parts), cap);
    out.emplace_back(std::move(u), std::move(value));
  }
  return Fragment::fn_map(std::move(out));
}

// ---------------------------------------------------------------------------
// Coherent extension. The construction follows the inductive proof: at an
// FnMap it passes to the tilde completion, then fixes one key at a time in
// an order where every ⊆-smaller or <=-smaller key comes first, solving a
// smaller extension problem for each new value. nullopt means some
// intermediate hypothesis failed; the caller then searches instead.

std::optional<Fragment> ce_rec(const FragmentKind& kind, const Fragment& f, const Fragment& g,
                               const Fragment& g2, const std::vector<Fragment>& K, std::size_t cap);

std::optional<Fragment> ce_fn(const FragmentKind& kind, const Fragment& f, const Fragment& g2,
                              const std::vector<Fragment>& K, std::size_t cap) {
  FragmentKind kk = kind.key(), vk = kind.value();
  Fragment F = materialize(kind, f, cap);
  Fragment Ft = F;
  std::vector<Fragment> Kt;
  try {
    Ft = tilde_rec(kind, F, cap);
    for (const auto& k : K) Kt.push_back(tilde_rec(kind, k, cap));
  } catch (const Error&) {
    Ft = F;
    Kt.clear();
    for (const auto& k : K) Kt.push_back(materialize(kind, k, cap));
  }

  const auto& es = Ft.entries();
  const std::size_t n = es.size();
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<std::vector<bool>> sub(n, std::vector<bool>(n)), le(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      sub[i][j] = subseteq_rec(kk, es[i].first, es[j].first, cap);
      le[i][j] = leq_rec(kk, es[i].first, es[j].first, cap);
      if (sub[i][j] || le[i][j]) preds[j].push_back(i);
    }
  std::vector<std::size_t> order;
  std::vector<bool> done(n, false);
  while (order.size() < n) {
    bool progressed = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (done[j]) continue;
      if (std::all_of(preds[j].begin(), preds[j].end(), [&](std::size_t i) { return done[i]; })) {
        done[j] = true;
        order.push_back(j);
        progressed = true;
      }
    }
    if (!progressed) return std::nullopt;
  }

  std::vector<std::optional<Fragment>> val(n);
  for (const auto& [a, v] : materialize(kind, g2, cap).entries()) {
    auto i = lookup_index(kk, Ft, a, cap);
    if (!i) return std::nullopt;
    val[*i] = v;
  }

  for (std::size_t j : order) {
    if (val[j]) continue;
    const Fragment& fa = es[j].second;
    std::vector<Fragment> L;
    for (const auto& k : Kt) {
      const Fragment* kv = lookup(kk, k, es[j].first, cap);
      if (!kv) return std::nullopt;
      L.push_back(*kv);
    }
    std::vector<Fragment> D, D2;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j || !val[i]) continue;
      if (sub[i][j]) {
        D.push_back(es[i].second);
        D2.push_back(*val[i]);
      }
      if (le[i][j]) {
        // some b ⊆ f(a') with b <= f(a) exists by validity of f; cut the
        // value already chosen at a' down to it
        std::optional<Fragment> b0;
        for (const auto& b : below_rec(vk, fa, cap))
          if (subseteq_rec(vk, b, es[i].second, cap)) {
            b0 = b;
            break;
          }
        if (!b0 || !leq_rec(vk, *val[i], es[i].second, cap)) return std::nullopt;
        L.push_back(detail::restrict_rec(vk, es[i].second, *val[i], *b0, cap));
      }
    }
    if (D.empty()) {
      val[j] = fa;
      continue;
    }
    if (!set_coherent(vk, D, cap) || !set_coherent(vk, D2, cap)) return std::nullopt;
    Fragment d = union_rec(vk, D, cap), d2 = union_rec(vk, D2, cap);
    if (!leq_rec(vk, d2, d, cap) || !subseteq_rec(vk, d, fa, cap)) return std::nullopt;
    for (const auto& l : L)
      if (!leq_rec(vk, l, fa, cap) || !leq_rec(vk, detail::restrict_rec(vk, fa, l, d, cap), d2, cap))
        return std::nullopt;
    auto r = ce_rec(vk, fa, d, d2, L, cap);
    if (!r) return std::nullopt;
    val[j] = std::move(*r);
  }

  std::vector<Fragment::Entry> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(es[i].first, *val[i]);
  Fragment result = Fragment::fn_map(std::move(out));
  if (Ft == F) return result;
  if (!leq_rec(kind, result, Ft, cap)) return std::nullopt;
  return detail::restrict_rec(kind, Ft, result, F, cap);
}

std::optional<Fragment> ce_rec(const FragmentKind& kind, const Fragment& f, const Fragment& g,
                               const Fragment& g2, const std::vector<Fragment>& K, std::size_t cap) {
  switch (kind.tag()) {
    case Fragment::Tag::Star:
      return Fragment::star();
    case Fragment::Tag::IndexMap: {
      for (const auto& k : K)
        for (const auto& c : k.components())
          if (!g2.component(c.first)) return std::nullopt;
      std::vector<Fragment::Component> cs;
      for (const auto& [i, c2] : g2.components()) {
        const Fragment* fi = f.component(i);
        const Fragment* gi = g.component(i);
        if (!fi || !gi) return std::nullopt;
        std::vector<Fragment> Ki;
        for (const auto& k : K)
          if (const Fragment* c = k.component(i)) Ki.push_back(*c);
        auto r = ce_rec(kind.component(i), *fi, *gi, c2, Ki, cap);
        if (!r) return std::nullopt;
        cs.emplace_back(i, std::move(*r));
      }
      return Fragment::index_map(std::move(cs));
    }
    case Fragment::Tag::ComponentSet: {
      std::vector<Fragment::Component> cs;
      for (const auto& [i, fi] : f.components()) {
        const Fragment* gi = g.component(i);
        if (!gi) {
          cs.emplace_back(i, fi);
          continue;
        }
        const Fragment* g2i = g2.component(i);
        if (!g2i) return std::nullopt;
        std::vector<Fragment> Ki;
        for (const auto& k : K) {
          const Fragment* c = k.component(i);
          if (!c) return std::nullopt;
          Ki.push_back(*c);
        }
        auto r = ce_rec(kind.component(i), fi, *gi, *g2i, Ki, cap);
        if (!r) return std::nullopt;
        cs.emplace_back(i, std::move(*r));
      }
      return Fragment::component_set(std::move(cs));
    }
    case Fragment::Tag::FnMap:
      return ce_fn(kind, f, g2, K, cap);
  }
  return std::nullopt;
}

}  // namespace

bool coherent_pair(const FragmentKind& kind, const Fragment& x, const Fragment& y) {
  check_shape(kind, x);
  check_shape(kind, y);
  return pair_rec(kind, x, y, kDefaultCap);
}

bool in_F(const FragmentKind& kind, const Fragment& f) { return coherent_pair(kind, f, f); }

CoherenceWitness is_coherent(const FragmentKind& kind, const std::vector<Fragment>& fs) {
  for (const auto& f : fs) check_shape(kind, f);
  CoherenceWitness w;
  for (const auto& f : fs)
    if (!pair_rec(kind, f, f, kDefaultCap)) {
      w.coherent = false;
      w.offending = {f};
      return w;
    }
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i + 1; j < fs.size(); ++j)
      if (!pair_rec(kind, fs[i], fs[j], kDefaultCap)) {
        w.coherent = false;
        w.offending = {fs[i], fs[j]};
        return w;
      }
  return w;
}

Fragment union_coherent(const FragmentKind& kind, const std::vector<Fragment>& fs) {
  if (fs.empty()) throw PreconditionError("union of an empty collection");
  auto w = is_coherent(kind, fs);
  if (!w) throw PreconditionError("union of an incoherent collection");
  return union_rec(kind, fs, kDefaultCap);
}

Fragment tilde(const FragmentKind& kind, const Fragment& f, std::size_t cap) {
  check_shape(kind, f);
  if (kind.tag() != Fragment::Tag::FnMap) throw PreconditionError("tilde is defined on fn maps only");
  if (!pair_rec(kind, f, f, cap)) throw PreconditionError("tilde requires a coherent fn map");
  return tilde_rec(kind, f, cap);
}

Fragment coherent_extension(const FragmentKind& kind, const Fragment& f, const Fragment& g, const Fragment& g2,
                            const std::vector<Fragment>& K, ExtensionStats* stats, std::size_t cap) {
  check_shape(kind, f);
  check_shape(kind, g);
  check_shape(kind, g2);
  for (const auto& k : K) check_shape(kind, k);
  for (const Fragment* x : {&f, &g, &g2})
    if (!pair_rec(kind, *x, *x, cap)) throw PreconditionError("coherent_extension: " + encode(*x) + " is not in F");
  if (!subseteq_rec(kind, g, f, cap)) throw PreconditionError("coherent_extension requires g ⊆ f");
  if (!leq_rec(kind, g2, g, cap)) throw PreconditionError("coherent_extension requires g' <= g");
  for (const auto& k : K) {
    if (!pair_rec(kind, k, k, cap)) throw PreconditionError("coherent_extension: " + encode(k) + " is not in F");
    if (!leq_rec(kind, k, f, cap)) throw PreconditionError("coherent_extension requires k <= f");
    if (!leq_rec(kind, detail::restrict_rec(kind, f, k, g, cap), g2, cap))
      throw PreconditionError("coherent_extension requires k restricted to g to be <= g'");
  }

  auto meets = [&](const Fragment& r) {
    if (!detail::valid_rec(kind, r, cap) || !leq_rec(kind, r, f, cap) || !subseteq_rec(kind, g2, r, cap))
      return false;
    for (const auto& k : K)
      if (!leq_rec(kind, k, r, cap)) return false;
    return pair_rec(kind, r, r, cap);
  };

  std::optional<Fragment> r;
  try {
    r = ce_rec(kind, f, g, g2, K, cap);
  } catch (const PreconditionError&) {
    r.reset();
  }
  if (r && meets(*r)) {
    if (stats) *stats = {true, false};
    return *r;
  }
  for (const auto& c : below_rec(kind, f, cap))
    if (meets(c)) {
      if (stats) *stats = {false, true};
      return c;
    }
  throw PreconditionError("coherent_extension: no extension exists below f");
}

}  // namespace boundsem
