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

// Concrete bounds for prenex classes up to Pi_3, their decisive pairs, and
// the family checkers.

#ifndef BOUNDSEM_BOUNDS_HPP
#define BOUNDSEM_BOUNDS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "boundsem/bounded.hpp"
#include "boundsem/family.hpp"

namespace boundsem {

// Nondecreasing, eventually constant step function N -> N.
class MonotoneFn {
 public:
  // Breakpoints (threshold, value): thresholds strictly increasing from 0,
  // values nondecreasing. The value at m is that of the last threshold <= m.
  explicit MonotoneFn(std::vector<std::pair<Nat, Nat>> breakpoints);
  static MonotoneFn constant(Nat v) { return MonotoneFn({{0, v}}); }

  Nat operator()(Nat m) const;
  const std::vector<std::pair<Nat, Nat>>& breakpoints() const { return bps_; }

  friend bool operator==(const MonotoneFn&, const MonotoneFn&) = default;

 private:
  std::vector<std::pair<Nat, Nat>> bps_;
};

// "mono:0->1,5->9"
MonotoneFn parse_monotone(std::string_view text);
std::string to_string(const MonotoneFn& f);
MonotoneFn pointwise_max(const std::vector<MonotoneFn>& fs);

// m -> m + gap(m) for m <= upto, constant afterwards. Exact on every m <= upto.
MonotoneFn lookahead(const MonotoneFn& gap, Nat upto);

struct Bound {
  enum class Kind { Star, Nat, Mono, Pair };
  Kind kind = Kind::Star;
  Nat n = 0;                    // Nat, Pair
  std::vector<MonotoneFn> fns;  // Mono: one; Pair: one shared or one per n in [0, n]

  static Bound star() { return {}; }
  static Bound nat(Nat n) { return {Kind::Nat, n, {}}; }
  static Bound mono(MonotoneFn f) { return {Kind::Mono, 0, {std::move(f)}}; }
  static Bound pair(Nat n, std::vector<MonotoneFn> fs);

  // Function used at level n (Mono and Pair).
  const MonotoneFn& fn(Nat level = 0) const;
  // Pair with one function, the pointwise max of the per-level ones.
  Bound normalized() const;

  friend bool operator==(const Bound&, const Bound&) = default;
};

// "*", "nat:3", "mono:0->1,5->9", "pair:3;mono:0->1[;mono:...]" (one mono
// for all n, or one per n = 0..N).
Bound parse_bound(std::string_view text);
std::string to_string(const Bound& b);

// The class a (forall, exists) bound pair is for: (*,*) FO, (nat,*) Pi_1,
// (*,nat) Sigma_1, (nat,nat) Pi_2, (mono,nat) Sigma_2, (pair,nat) Pi_3.
// Throws PreconditionError for other combinations.
PrenexClass bound_class(const Bound& A, const Bound& E);

// Decisive pair for the bounds. Countable conjunctions get their indices
// from their alternation block: Pi_2 gives [0,N] then [0,M]; Sigma_2 gives
// [0,E] then [0,F(m)]; Pi_3 gives [0,N], [0,E], then {F_n(m)}.
// Throws PreconditionError if f is not in the bounds' class.
DecisivePair fragment_of(const Bound& A, const Bound& E, const Formula& f);

// Candidates for the exists side, in search order.
std::vector<Bound> enumerate_exists_bounds(const PrenexClass& c, Nat cap);

struct CheckReport {
  struct Candidate {
    std::string label;             // "E=3" or "m=3"
    std::vector<std::size_t> sat;  // satisfied indices, increasing
    bool covers_tail = false;
  };

  std::string formula;
  std::string forall_bound;
  std::string witness_name;  // "E" or "m"
  std::vector<Candidate> candidates;
  std::optional<std::size_t> winner;  // index into candidates
  std::size_t prefix_length = 0;
  std::size_t tail_start = 0;
  std::vector<std::string> labels;  // structure labels
  std::vector<double> seconds;      // per structure

  bool verdict() const { return winner.has_value(); }
};

// Stable lines: no timings.
std::string render_machine(const CheckReport& r);
std::string render_table(const CheckReport& r);

// Worker count from BOUNDSEM_THREADS, else hardware concurrency.
unsigned default_threads();

// For each exists candidate up to capE, the indices i with
// M_i |= bounded(fragment_of(A, E), f). The first candidate covering the
// tail wins; every candidate is reported.
CheckReport check_family(const FamilySpec& fam, const Formula& f, const Bound& A, Nat capE,
                         unsigned threads = 0);

// Direct check of d(c_m, c_max(m,F(m))) < eps on sequence-space structures,
// for m = 0..capM. Independent of the fragment machinery.
CheckReport check_metastable(const FamilySpec& fam, const Rational& eps, const MonotoneFn& F, Nat capM,
                             unsigned threads = 0);

}  // namespace boundsem

#endif  // BOUNDSEM_BOUNDS_HPP
