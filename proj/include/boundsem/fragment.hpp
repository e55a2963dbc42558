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

// Finite bound fragments and their calculus. A fragment of role Q for a
// formula node is one of:
//   *        atomic nodes
//   FnMap    (forall, ~psi): a finite partial map from forall-fragments of psi
//            to exists-fragments of psi
//   IndexMap (forall, /\_i psi_i): index -> forall-fragment of psi_i
//   ComponentSet (exists, /\_i psi_i): at most one exists-fragment per index
// (exists, ~psi) is the forall space of psi and quantifiers are transparent,
// so every operation is driven by a FragmentKind built from the formula shape.

#ifndef BOUNDSEM_FRAGMENT_HPP
#define BOUNDSEM_FRAGMENT_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "boundsem/error.hpp"
#include "boundsem/logic.hpp"

namespace boundsem {

enum class Role { Forall, Exists };

class Fragment {
 public:
  enum class Tag { Star, FnMap, IndexMap, ComponentSet };
  using Entry = std::pair<Fragment, Fragment>;
  using Component = std::pair<Nat, Fragment>;

  Fragment() = default;  // *
  static Fragment star() { return Fragment(); }
  // Keys are sorted into canonical order; a repeated key throws Error.
  static Fragment fn_map(std::vector<Entry> entries);
  // The map with domain {a : a <= top} sending every key to `value`. Kept
  // symbolic so that bounds with exponentially many keys stay small.
  static Fragment fn_below(Fragment top, Fragment value);
  static Fragment index_map(std::vector<Component> components);
  static Fragment component_set(std::vector<Component> components);

  Tag tag() const;
  bool is_uniform() const;
  const std::vector<Entry>& entries() const;          // explicit FnMap
  const Fragment& top() const;                        // uniform FnMap
  const Fragment& uniform_value() const;              // uniform FnMap
  const std::vector<Component>& components() const;  // IndexMap, ComponentSet
  const Fragment* component(Nat i) const;             // nullptr if absent
  // Explicit FnMap lookup by syntactic key.
  const Fragment* find(const Fragment& key) const;

  std::size_t depth() const;  // constructor nesting; * has depth 0
  std::size_t size() const;   // node count
  bool contains_symbolic() const;  // some fn_below map occurs inside

  bool same_node(const Fragment& o) const { return rep_ == o.rep_; }
  friend int compare(const Fragment& a, const Fragment& b);
  friend bool operator==(const Fragment& a, const Fragment& b) { return compare(a, b) == 0; }
  friend bool operator<(const Fragment& a, const Fragment& b) { return compare(a, b) < 0; }

 private:
  struct Rep;
  explicit Fragment(std::shared_ptr<const Rep> r) : rep_(std::move(r)) {}
  std::shared_ptr<const Rep> rep_;
};

// Canonical s-expression: *, (fn (k v) ...), (fnbelow top value),
// (imap (i f) ...), (cset (i e) ...).
std::string encode(const Fragment& f);
Fragment decode(std::string_view text);

// The fragment space of a formula node for one role, normalized so that
// (exists, ~psi) is stored as (forall, psi).
class FragmentKind {
 public:
  FragmentKind(Role role, ShapePtr shape);
  static FragmentKind of(Role role, const Formula& f) { return FragmentKind(role, f.shape()); }

  Role role() const { return role_; }
  const ShapePtr& shape() const { return shape_; }
  Fragment::Tag tag() const;

  FragmentKind key() const;    // FnMap: (forall, psi)
  FragmentKind value() const;  // FnMap: (exists, psi)
  FragmentKind component(Nat i) const;
  bool has_component(Nat i) const;

  friend bool operator==(const FragmentKind& a, const FragmentKind& b);

 private:
  Role role_;
  ShapePtr shape_;
};

std::string to_string(const FragmentKind& k);

// Default cap on the size of any enumerated set; exceeding it throws
// BoundTooLarge.
inline constexpr std::size_t kDefaultCap = std::size_t{1} << 18;

// Throws ShapeMismatch if the constructor tags or component indices of `f`
// do not fit `kind`.
void check_shape(const FragmentKind& kind, const Fragment& f);

// Membership in the fragment space. Shape errors throw ShapeMismatch.
bool is_valid(const FragmentKind& kind, const Fragment& f);

bool subseteq(const FragmentKind& kind, const Fragment& f, const Fragment& g);
bool leq(const FragmentKind& kind, const Fragment& f, const Fragment& g);

// Value of an FnMap at `key`, or nullopt outside its domain.
std::optional<Fragment> apply(const FragmentKind& kind, const Fragment& f, const Fragment& key);
// Domain of an FnMap in canonical order.
std::vector<Fragment> domain(const FragmentKind& kind, const Fragment& f, std::size_t cap = kDefaultCap);

// Every valid g with g <= f, in canonical order.
std::vector<Fragment> enumerate_below(const FragmentKind& kind, const Fragment& f,
                                     std::size_t cap = kDefaultCap);

// Greatest lower bound of g0, g1 below f. Requires g0 <= f and g1 <= f.
Fragment min3(const FragmentKind& kind, const Fragment& f, const Fragment& g0, const Fragment& g1);

// f2 cut down to the shape of fstar. Requires f2 <= f and fstar ⊆ f.
Fragment restrict(const FragmentKind& kind, const Fragment& f, const Fragment& f2,
                  const Fragment& fstar);

struct CoherenceWitness {
  bool coherent = true;
  // A smallest failing sub-collection: one fragment, or two whose
  // singletons are coherent.
  std::vector<Fragment> offending;
  explicit operator bool() const { return coherent; }
};

CoherenceWitness is_coherent(const FragmentKind& kind, const std::vector<Fragment>& fs);
bool coherent_pair(const FragmentKind& kind, const Fragment& x, const Fragment& y);
// {f} coherent.
bool in_F(const FragmentKind& kind, const Fragment& f);

// Least common extension of a non-empty coherent collection.
Fragment union_coherent(const FragmentKind& kind, const std::vector<Fragment>& fs);

// Closure of an FnMap in F under unions of coherent key sets.
Fragment tilde(const FragmentKind& kind, const Fragment& f, std::size_t cap = kDefaultCap);

struct ExtensionStats {
  bool constructive = false;  // the step-by-step construction succeeded
  bool searched = false;      // fell back to exhaustive search below f
};

// Given g2 <= g ⊆ f in F and K with k <= f and (k restricted to g) <= g2,
// returns f' <= f in F with g2 ⊆ f' and k <= f' for every k in K.
Fragment coherent_extension(const FragmentKind& kind, const Fragment& f, const Fragment& g,
                            const Fragment& g2, const std::vector<Fragment>& K,
                            ExtensionStats* stats = nullptr, std::size_t cap = kDefaultCap);

// Replaces every symbolic fn_below map by its explicit form.
Fragment expand(const FragmentKind& kind, const Fragment& f, std::size_t cap = kDefaultCap);
// Equality up to the symbolic/explicit representation of FnMaps.
bool equivalent(const FragmentKind& kind, const Fragment& f, const Fragment& g,
                std::size_t cap = kDefaultCap);

}  // namespace boundsem

#endif  // BOUNDSEM_FRAGMENT_HPP
