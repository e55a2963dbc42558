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

// Formulas of the countable-conjunction logic: index arithmetic, terms,
// the four-node formula AST and the prenex classifier.

#ifndef BOUNDSEM_LOGIC_HPP
#define BOUNDSEM_LOGIC_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "boundsem/error.hpp"

namespace boundsem {

using Nat = std::uint64_t;

// ---------------------------------------------------------------------------
// Signature

struct SymbolInfo {
  enum class Sort { Predicate, Function, Constant };
  std::string name;
  Sort sort;
  std::size_t arity;
  bool indexed;
};

class Signature {
 public:
  Signature& predicate(const std::string& name, std::size_t arity, bool indexed = false);
  Signature& function(const std::string& name, std::size_t arity, bool indexed = false);
  Signature& constant(const std::string& name, bool indexed = false);

  const SymbolInfo* find(const std::string& name) const;
  const std::vector<SymbolInfo>& symbols() const { return symbols_; }

  // Union of two signatures; throws if a name is declared twice differently.
  Signature merged(const Signature& other) const;

 private:
  void add(SymbolInfo info);
  std::vector<SymbolInfo> symbols_;
};

// D_n binary predicates and c_k constants (the metric sequence language).
Signature metric_signature();
// S successor plus the U_i colour classes.
Signature cycle_signature();

// ---------------------------------------------------------------------------
// Index arithmetic over N: literals, metavariables, +, *, max.

class IndexExpr {
 public:
  enum class Op { Lit, Var, Add, Mul, Max };

  static IndexExpr lit(Nat value);
  static IndexExpr var(std::string name);
  static IndexExpr add(IndexExpr a, IndexExpr b);
  static IndexExpr mul(IndexExpr a, IndexExpr b);
  static IndexExpr max(IndexExpr a, IndexExpr b);

  Op op() const;
  Nat value() const;               // Lit only
  const std::string& name() const;  // Var only
  const IndexExpr& lhs() const;
  const IndexExpr& rhs() const;

  bool closed() const;
  // Value of a closed expression; throws Error naming a free metavariable.
  Nat evaluate() const;
  // Replaces `var` by `value`, folding every closed subexpression.
  IndexExpr substitute(const std::string& var, Nat value) const;
  void collect_vars(std::set<std::string>& out) const;

  friend bool operator==(const IndexExpr& a, const IndexExpr& b);

 private:
  struct Node;
  explicit IndexExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

std::string to_string(const IndexExpr& e);

// ---------------------------------------------------------------------------
// Terms

struct Term {
  enum class Kind { Var, Const, App };
  Kind kind = Kind::Var;
  std::string name;                  // variable, constant family or function family
  std::optional<IndexExpr> index;    // family index for indexed symbols
  std::optional<IndexExpr> iterate;  // f^k(x), unary functions only
  std::vector<Term> args;

  static Term variable(std::string name);
  static Term constant(std::string family, std::optional<IndexExpr> index = std::nullopt);
  static Term apply(std::string family, std::vector<Term> args,
                    std::optional<IndexExpr> index = std::nullopt,
                    std::optional<IndexExpr> iterate = std::nullopt);

  friend bool operator==(const Term& a, const Term& b);
};

std::string to_string(const Term& t);

// ---------------------------------------------------------------------------
// Shapes: the skeleton of a formula that fragment spaces are built over.
// Quantifiers are transparent; every component of a template conjunction
// shares the body's skeleton.

struct Shape;
using ShapePtr = std::shared_ptr<const Shape>;

struct Shape {
  enum class Kind { Atom, Not, And };
  Kind kind = Kind::Atom;
  ShapePtr child;                 // Not
  std::optional<Nat> width;       // And: component count, nullopt for N
  std::vector<ShapePtr> parts;    // And: one shared part, or one per component

  // Skeleton of component i of an And; throws if i is out of range.
  const ShapePtr& component(Nat i) const;
  bool has_component(Nat i) const { return !width || i < *width; }
};

bool same_shape(const Shape& a, const Shape& b);
std::string to_string(const Shape& s);

// ---------------------------------------------------------------------------
// Formulas

enum class IndexSet { Nat, Pair, Finite };

class Formula {
 public:
  enum class Kind { Atomic, Not, Forall, And };

  static Formula atomic(std::string predicate, std::vector<Term> terms,
                        std::optional<IndexExpr> index = std::nullopt);
  static Formula negation(Formula body);
  static Formula forall(std::string var, Formula body);
  // Template conjunction over N or over {0,1}; `metavar` is bound in `body`.
  static Formula big_and(IndexSet set, std::string metavar, Formula body);
  // Explicit finite conjunction; the empty conjunction is `true`.
  static Formula conjunction(std::vector<Formula> parts);
  static Formula verum() { return conjunction({}); }
  static Formula falsum() { return negation(verum()); }

  Kind kind() const;
  // Atomic
  const std::string& predicate() const;
  const std::optional<IndexExpr>& index() const;
  const std::vector<Term>& terms() const;
  // Not / Forall / template And: the single child
  const Formula& body() const;
  const std::string& var() const;  // Forall variable or And metavariable
  // And
  IndexSet index_set() const;
  std::optional<Nat> width() const;  // nullopt for N
  bool has_component(Nat i) const;
  Formula component(Nat i) const;
  const std::vector<Formula>& parts() const;  // Finite only

  const ShapePtr& shape() const;
  std::size_t size() const;  // node count

  bool same_node(const Formula& other) const { return node_ == other.node_; }
  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Printed in the parser's grammar; parse(print(f)) == f.
std::string to_string(const Formula& f);

// Substitutes `value` for the free occurrences of `metavar`. Throws
// PreconditionError when `metavar` does not occur free in `f`.
Formula instantiate(const Formula& f, const std::string& metavar, Nat value);
// Same substitution without the occurrence check (constant templates).
Formula substitute_index(const Formula& f, const std::string& metavar, Nat value);

std::set<std::string> free_vars(const Formula& f);
std::set<std::string> free_index_vars(const Formula& f);

// True when no conjunction over N occurs.
bool is_first_order(const Formula& f);

struct PrenexClass {
  enum class Kind { FO, Pi, Sigma, General };
  Kind kind = Kind::FO;
  int level = 0;

  static PrenexClass fo() { return {Kind::FO, 0}; }
  static PrenexClass pi(int n) { return {Kind::Pi, n}; }
  static PrenexClass sigma(int n) { return {Kind::Sigma, n}; }
  static PrenexClass general() { return {Kind::General, 0}; }

  friend bool operator==(const PrenexClass&, const PrenexClass&) = default;
};

std::string to_string(const PrenexClass& c);
PrenexClass classify(const Formula& f);

// Least n with f in Pi_n (resp. Sigma_n), where Pi_n and Sigma_n are both
// included in Pi_{n+1} and Sigma_{n+1}.
int pi_level(const Formula& f);
int sigma_level(const Formula& f);

}  // namespace boundsem

#endif  // BOUNDSEM_LOGIC_HPP
