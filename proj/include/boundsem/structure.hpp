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

// Finite structures whose indexed symbol families are interpreted by tables
// and, for the metric language, by total rules.

#ifndef BOUNDSEM_STRUCTURE_HPP
#define BOUNDSEM_STRUCTURE_HPP

#include <boost/rational.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "boundsem/logic.hpp"

namespace boundsem {

using Element = std::uint32_t;
using Rational = boost::rational<std::int64_t>;
using Env = std::map<std::string, Element>;

// "p/q" or "p"; throws Error on malformed input or zero denominator.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

// Symmetric, zero-diagonal matrix of non-negative rationals with every entry
// at most 1. Pseudo-metrics are kept as given (no quotient).
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::vector<std::vector<Rational>> rows);  // validates

  std::size_t size() const { return rows_.size(); }
  const Rational& at(Element x, Element y) const { return rows_[x][y]; }
  const std::vector<std::vector<Rational>>& rows() const { return rows_; }

  // D_n(x, y): d(x, y) < 1/n. D_0 holds everywhere.
  bool below(Nat n, Element x, Element y) const;

 private:
  std::vector<std::vector<Rational>> rows_;
};

// c_k for every k: an explicit prefix, then either the last `period` prefix
// values repeated or a constant.
struct SequenceRule {
  enum class Tail { Periodic, Const };
  std::vector<Element> prefix;
  Tail tail = Tail::Const;
  Nat param = 0;  // period length or constant value

  Element at(Nat k) const;
  void validate(std::size_t universe) const;
};

class Structure {
 public:
  explicit Structure(std::size_t size, std::string label = "");

  std::size_t size() const { return size_; }
  const std::string& label() const { return label_; }

  // Tuples must reference universe elements; throws Error naming the row.
  void add_relation(const std::string& family, std::optional<Nat> index, std::size_t arity,
                    const std::vector<std::vector<Element>>& tuples);
  // `table` lists values in lexicographic order of argument tuples.
  void set_function(const std::string& family, std::optional<Nat> index, std::size_t arity,
                    std::vector<Element> table);
  void set_constant(const std::string& family, std::optional<Nat> index, Element value);
  void set_distance_rule(const std::string& family, DistanceMatrix d);
  void set_sequence_rule(const std::string& family, SequenceRule rule);

  bool holds(const std::string& family, std::optional<Nat> index, const Element* args, std::size_t n) const;
  Element apply(const std::string& family, std::optional<Nat> index, const Element* args, std::size_t n) const;
  Element constant(const std::string& family, std::optional<Nat> index) const;

  const DistanceMatrix* distance_rule(const std::string& family) const;
  const SequenceRule* sequence_rule(const std::string& family) const;

  // Rule/table agreement and totality of function tables.
  void validate() const;

 private:
  using Key = std::pair<std::string, std::optional<Nat>>;
  struct Relation {
    std::size_t arity;
    std::vector<bool> bits;
  };
  struct Function {
    std::size_t arity;
    std::vector<Element> table;
  };

  std::size_t offset(const Element* args, std::size_t n, const std::string& what) const;
  [[noreturn]] void missing(const std::string& family, std::optional<Nat> index) const;

  std::size_t size_;
  std::string label_;
  std::map<Key, Relation> relations_;
  std::map<Key, Function> functions_;
  std::map<Key, Element> constants_;
  std::map<std::string, DistanceMatrix> distances_;
  std::map<std::string, SequenceRule> sequences_;
};

// Tarskian satisfaction. Countable conjunctions are rejected; finite and
// pair conjunctions are evaluated componentwise.
bool eval_fo(const Structure& m, const Formula& f, const Env& env = {});

// Value of a closed-index term under env.
Element eval_term(const Structure& m, const Term& t, const Env& env);

}  // namespace boundsem

#endif  // BOUNDSEM_STRUCTURE_HPP
