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

// Decisive pairs, bounded satisfaction and compilation of a bounded formula
// to a first-order one.

#ifndef BOUNDSEM_BOUNDED_HPP
#define BOUNDSEM_BOUNDED_HPP

#include <functional>
#include <memory>

#include "boundsem/fragment.hpp"
#include "boundsem/structure.hpp"

namespace boundsem {

// a lives in the forall space of the formula, e in its exists space.
struct DecisivePair {
  Fragment a;
  Fragment e;

  friend bool operator==(const DecisivePair&, const DecisivePair&) = default;
};

std::string encode(const DecisivePair& p);  // "<a> <e>" in the fragment encoding
DecisivePair decode_pair(std::string_view text);

struct BoundedOptions {
  std::size_t cap = kDefaultCap;  // per enumerate_below call
  // A negation whose map is fn_below(top, v) with e <= top is decided by
  // (e, v) alone. Off means the literal definition is followed.
  bool uniform_fast_path = true;
};

bool is_decisive(const Formula& f, const DecisivePair& p, const BoundedOptions& opts = {});

// Evaluation plan for one (formula, pair); built once, run on many structures.
class BoundedPlan {
 public:
  // Throws PreconditionError if the pair is not decisive.
  BoundedPlan(const Formula& f, const DecisivePair& p, const BoundedOptions& opts = {});

  bool eval(const Structure& m, const Env& env = {}) const;
  std::size_t nodes() const { return nodes_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::size_t nodes_ = 0;
};

bool eval_bounded(const Structure& m, const Formula& f, const DecisivePair& p, const Env& env = {},
                  const BoundedOptions& opts = {});

struct CompileOptions {
  BoundedOptions bounded;
  std::size_t max_disjuncts = 1 << 16;  // per negation; BoundTooLarge beyond
};

// First-order formula with the same free variables and the same truth value
// as the bounded relation on every finite structure.
Formula compile_fo(const Formula& f, const DecisivePair& p, const CompileOptions& opts = {});

// Pair builders. negation_pair(child) is (fn_below(child.a, child.e), child.a).
DecisivePair atom_pair();
DecisivePair negation_pair(const DecisivePair& child);
DecisivePair conjunction_pair(const std::vector<std::pair<Nat, DecisivePair>>& parts);

// Total pair built bottom-up: atoms get (*, *), negations negation_pair,
// finite conjunctions every component and countable conjunctions the indices
// domain(path, exists) returns. `path` lists the countable conjunctions above
// the node (outermost first) with the index chosen there; `exists` is true
// under an odd number of negations. Decisive by construction.
struct Level {
  Nat index;
  bool exists;
};
using DomainFn = std::function<std::vector<Nat>(const std::vector<Level>& path, bool exists)>;
DecisivePair canonical_pair(const Formula& f, const DomainFn& domain);

// Least total decisive pair of a first-order formula; FnMaps are expanded
// when they fit in `cap` entries. Throws PreconditionError for other input.
DecisivePair fo_decisive_pair(const Formula& f, std::size_t cap = 4096);

}  // namespace boundsem

#endif  // BOUNDSEM_BOUNDED_HPP
