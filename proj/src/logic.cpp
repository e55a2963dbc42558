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

#include "boundsem/logic.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace boundsem {

// ---------------------------------------------------------------------------
// Signature

void Signature::add(SymbolInfo info) {
  if (info.name.empty()) throw Error("empty symbol name");
  if (const SymbolInfo* old = find(info.name)) {
    if (old->sort == info.sort && old->arity == info.arity && old->indexed == info.indexed) return;
    throw Error("symbol declared twice: " + info.name);
  }
  symbols_.push_back(std::move(info));
}

Signature& Signature::predicate(const std::string& name, std::size_t arity, bool indexed) {
  add({name, SymbolInfo::Sort::Predicate, arity, indexed});
  return *this;
}

Signature& Signature::function(const std::string& name, std::size_t arity, bool indexed) {
  add({name, SymbolInfo::Sort::Function, arity, indexed});
  return *this;
}

Signature& Signature::constant(const std::string& name, bool indexed) {
  add({name, SymbolInfo::Sort::Constant, 0, indexed});
  return *this;
}

const SymbolInfo* Signature::find(const std::string& name) const {
  for (const auto& s : symbols_)
    if (s.name == name) return &s;
  return nullptr;
}

Signature Signature::merged(const Signature& other) const {
  Signature out = *this;
  for (const auto& s : other.symbols_) out.add(s);
  return out;
}

Signature metric_signature() {
  Signature sig;
  sig.predicate("D", 2, true).constant("c", true);
  return sig;
}

Signature cycle_signature() {
  Signature sig;
  sig.function("S", 1).predicate("U", 1, true);
  return sig;
}

// ---------------------------------------------------------------------------
// IndexExpr

struct IndexExpr::Node {
  Op op;
  Nat value = 0;
  std::string name;
  std::optional<IndexExpr> lhs, rhs;
};

IndexExpr IndexExpr::lit(Nat value) {
  return IndexExpr(std::make_shared<const Node>(Node{Op::Lit, value, {}, {}, {}}));
}

IndexExpr IndexExpr::var(std::string name) {
  return IndexExpr(std::make_shared<const Node>(Node{Op::Var, 0, std::move(name), {}, {}}));
}

IndexExpr IndexExpr::add(IndexExpr a, IndexExpr b) {
  return IndexExpr(std::make_shared<const Node>(Node{Op::Add, 0, {}, std::move(a), std::move(b)}));
}

IndexExpr IndexExpr::mul(IndexExpr a, IndexExpr b) {
  return IndexExpr(std::make_shared<const Node>(Node{Op::Mul, 0, {}, std::move(a), std::move(b)}));
}

IndexExpr IndexExpr::max(IndexExpr a, IndexExpr b) {
  return IndexExpr(std::make_shared<const Node>(Node{Op::Max, 0, {}, std::move(a), std::move(b)}));
}

IndexExpr::Op IndexExpr::op() const { return node_->op; }
Nat IndexExpr::value() const { return node_->value; }
const std::string& IndexExpr::name() const { return node_->name; }
const IndexExpr& IndexExpr::lhs() const { return *node_->lhs; }
const IndexExpr& IndexExpr::rhs() const { return *node_->rhs; }

bool IndexExpr::closed() const {
  switch (op()) {
    case Op::Lit: return true;
    case Op::Var: return false;
    default: return lhs().closed() && rhs().closed();
  }
}

namespace {

Nat checked_add(Nat a, Nat b) {
  Nat r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("index arithmetic overflow");
  return r;
}

Nat checked_mul(Nat a, Nat b) {
  Nat r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("index arithmetic overflow");
  return r;
}

}  // namespace

Nat IndexExpr::evaluate() const {
  switch (op()) {
    case Op::Lit: return value();
    case Op::Var: throw Error("free index variable " + name());
    case Op::Add: return checked_add(lhs().evaluate(), rhs().evaluate());
    case Op::Mul: return checked_mul(lhs().evaluate(), rhs().evaluate());
    case Op::Max: return std::max(lhs().evaluate(), rhs().evaluate());
  }
  return 0;
}

IndexExpr IndexExpr::substitute(const std::string& v, Nat val) const {
  switch (op()) {
    case Op::Lit: return *this;
    case Op::Var: return name() == v ? lit(val) : *this;
    default: break;
  }
  IndexExpr a = lhs().substitute(v, val);
  IndexExpr b = rhs().substitute(v, val);
  IndexExpr out = op() == Op::Add ? add(a, b) : op() == Op::Mul ? mul(a, b) : max(a, b);
  if (a.op() == Op::Lit && b.op() == Op::Lit) return lit(out.evaluate());
  return out;
}

void IndexExpr::collect_vars(std::set<std::string>& out) const {
  switch (op()) {
    case Op::Lit: return;
    case Op::Var: out.insert(name()); return;
    default:
      lhs().collect_vars(out);
      rhs().collect_vars(out);
  }
}

bool operator==(const IndexExpr& a, const IndexExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case IndexExpr::Op::Lit: return a.value() == b.value();
    case IndexExpr::Op::Var: return a.name() == b.name();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

namespace {

// Precedence: 0 sum, 1 product, 2 atom.
void print_index(std::ostream& os, const IndexExpr& e, int context) {
  using Op = IndexExpr::Op;
  switch (e.op()) {
    case Op::Lit: os << e.value(); return;
    case Op::Var: os << e.name(); return;
    case Op::Max:
      os << "max(";
      print_index(os, e.lhs(), 0);
      os << ", ";
      print_index(os, e.rhs(), 0);
      os << ")";
      return;
    case Op::Add:
    case Op::Mul: {
      int prec = e.op() == Op::Add ? 0 : 1;
      bool paren = prec < context;
      if (paren) os << "(";
      print_index(os, e.lhs(), prec);
      os << (e.op() == Op::Add ? " + " : " * ");
      // Right operand one level tighter so left-nested chains reparse exactly.
      print_index(os, e.rhs(), prec + 1);
      if (paren) os << ")";
      return;
    }
  }
}

// `_3`, `_n` or `_{m + 1}` style suffix.
std::string index_suffix(const IndexExpr& e) {
  std::ostringstream os;
  if (e.op() == IndexExpr::Op::Lit || e.op() == IndexExpr::Op::Var) {
    print_index(os, e, 2);
  } else {
    os << "{";
    print_index(os, e, 0);
    os << "}";
  }
  return os.str();
}

}  // namespace

std::string to_string(const IndexExpr& e) {
  std::ostringstream os;
  print_index(os, e, 0);
  return os.str();
}

// ---------------------------------------------------------------------------
// Terms

Term Term::variable(std::string name) {
  Term t;
  t.kind = Kind::Var;
  t.name = std::move(name);
  return t;
}

Term Term::constant(std::string family, std::optional<IndexExpr> index) {
  Term t;
  t.kind = Kind::Const;
  t.name = std::move(family);
  t.index = std::move(index);
  return t;
}

Term Term::apply(std::string family, std::vector<Term> args, std::optional<IndexExpr> index,
                 std::optional<IndexExpr> iterate) {
  if (iterate && args.size() != 1) throw Error("iteration count on non-unary function " + family);
  Term t;
  t.kind = Kind::App;
  t.name = std::move(family);
  t.args = std::move(args);
  t.index = std::move(index);
  t.iterate = std::move(iterate);
  return t;
}

bool operator==(const Term& a, const Term& b) {
  return a.kind == b.kind && a.name == b.name && a.index == b.index && a.iterate == b.iterate &&
         a.args == b.args;
}

std::string to_string(const Term& t) {
  std::string out = t.name;
  if (t.index) out += "_" + index_suffix(*t.index);
  if (t.kind != Term::Kind::App) return out;
  if (t.iterate) out += "^" + index_suffix(*t.iterate);
  out += "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(t.args[i]);
  }
  return out + ")";
}

namespace {

Term substitute_term(const Term& t, const std::string& v, Nat val) {
  Term out = t;
  if (out.index) out.index = out.index->substitute(v, val);
  if (out.iterate) out.iterate = out.iterate->substitute(v, val);
  for (auto& a : out.args) a = substitute_term(a, v, val);
  return out;
}

void term_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Var) out.insert(t.name);
  for (const auto& a : t.args) term_vars(a, out);
}

void term_index_vars(const Term& t, std::set<std::string>& out) {
  if (t.index) t.index->collect_vars(out);
  if (t.iterate) t.iterate->collect_vars(out);
  for (const auto& a : t.args) term_index_vars(a, out);
}

}  // namespace

// ---------------------------------------------------------------------------
// Shapes

const ShapePtr& Shape::component(Nat i) const {
  if (kind != Kind::And) throw ShapeMismatch("component of a non-conjunction");
  if (!has_component(i)) throw ShapeMismatch("conjunct index " + std::to_string(i) + " out of range");
  return parts.size() == 1 ? parts[0] : parts[i];
}

bool same_shape(const Shape& a, const Shape& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Shape::Kind::Atom: return true;
    case Shape::Kind::Not: return same_shape(*a.child, *b.child);
    case Shape::Kind::And: {
      if (a.width != b.width) return false;
      if (a.parts.size() == b.parts.size()) {
        for (std::size_t i = 0; i < a.parts.size(); ++i)
          if (!same_shape(*a.parts[i], *b.parts[i])) return false;
        return true;
      }
      // A shared part against per-component parts.
      for (Nat i = 0; i < *a.width; ++i)
        if (!same_shape(*a.component(i), *b.component(i))) return false;
      return true;
    }
  }
  return false;
}

std::string to_string(const Shape& s) {
  switch (s.kind) {
    case Shape::Kind::Atom: return "atom";
    case Shape::Kind::Not: return "not(" + to_string(*s.child) + ")";
    case Shape::Kind::And: {
      std::string out = "and[" + (s.width ? std::to_string(*s.width) : std::string("N")) + "](";
      for (std::size_t i = 0; i < s.parts.size(); ++i) {
        if (i) out += ", ";
        out += to_string(*s.parts[i]);
      }
      return out + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Formulas

struct Formula::Node {
  Kind kind;
  std::string symbol;  // predicate, quantified variable or metavariable
  std::optional<IndexExpr> index;
  std::vector<Term> terms;
  std::vector<Formula> children;
  IndexSet set = IndexSet::Finite;
  ShapePtr shape;
  std::size_t size = 1;
};

namespace {

ShapePtr atom_shape() {
  static const ShapePtr s = std::make_shared<const Shape>(Shape{Shape::Kind::Atom, nullptr, {}, {}});
  return s;
}

}  // namespace

Formula Formula::atomic(std::string predicate, std::vector<Term> terms, std::optional<IndexExpr> index) {
  Node n{Kind::Atomic, std::move(predicate), std::move(index), std::move(terms), {}, IndexSet::Finite,
         atom_shape(), 1};
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::negation(Formula body) {
  auto shape = std::make_shared<const Shape>(Shape{Shape::Kind::Not, body.shape(), {}, {}});
  std::size_t size = body.size() + 1;
  Node n{Kind::Not, {}, {}, {}, {std::move(body)}, IndexSet::Finite, std::move(shape), size};
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::forall(std::string var, Formula body) {
  ShapePtr shape = body.shape();
  std::size_t size = body.size() + 1;
  Node n{Kind::Forall, std::move(var), {}, {}, {std::move(body)}, IndexSet::Finite, std::move(shape), size};
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::big_and(IndexSet set, std::string metavar, Formula body) {
  if (set == IndexSet::Finite) throw Error("big_and needs the N or pair index set");
  std::optional<Nat> width;
  if (set == IndexSet::Pair) width = 2;
  auto shape = std::make_shared<const Shape>(Shape{Shape::Kind::And, nullptr, width, {body.shape()}});
  std::size_t size = body.size() + 1;
  Node n{Kind::And, std::move(metavar), {}, {}, {std::move(body)}, set, std::move(shape), size};
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::conjunction(std::vector<Formula> parts) {
  Shape s{Shape::Kind::And, nullptr, Nat(parts.size()), {}};
  std::size_t size = 1;
  for (const auto& p : parts) {
    s.parts.push_back(p.shape());
    size += p.size();
  }
  Node n{Kind::And, {}, {}, {}, std::move(parts), IndexSet::Finite,
         std::make_shared<const Shape>(std::move(s)), size};
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula::Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::predicate() const { return node_->symbol; }
const std::optional<IndexExpr>& Formula::index() const { return node_->index; }
const std::vector<Term>& Formula::terms() const { return node_->terms; }
const Formula& Formula::body() const {
  if (node_->children.size() != 1 || (node_->set == IndexSet::Finite && kind() == Kind::And))
    throw Error("formula node has no single body");
  return node_->children[0];
}
const std::string& Formula::var() const { return node_->symbol; }
IndexSet Formula::index_set() const { return node_->set; }
std::optional<Nat> Formula::width() const { return node_->shape->width; }
const std::vector<Formula>& Formula::parts() const { return node_->children; }
const ShapePtr& Formula::shape() const { return node_->shape; }
std::size_t Formula::size() const { return node_->size; }

bool Formula::has_component(Nat i) const {
  if (kind() != Kind::And) return false;
  return !width() || i < *width();
}

Formula Formula::component(Nat i) const {
  if (!has_component(i)) throw Error("conjunct index " + std::to_string(i) + " out of range");
  if (index_set() == IndexSet::Finite) return node_->children[i];
  return substitute_index(node_->children[0], var(), i);
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.symbol == y.symbol && x.index == y.index && x.terms == y.terms &&
         x.set == y.set && x.children == y.children;
}

Formula substitute_index(const Formula& f, const std::string& v, Nat val) {
  switch (f.kind()) {
    case Formula::Kind::Atomic: {
      std::vector<Term> terms;
      terms.reserve(f.terms().size());
      for (const auto& t : f.terms()) terms.push_back(substitute_term(t, v, val));
      std::optional<IndexExpr> idx;
      if (f.index()) idx = f.index()->substitute(v, val);
      return Formula::atomic(f.predicate(), std::move(terms), std::move(idx));
    }
    case Formula::Kind::Not: return Formula::negation(substitute_index(f.body(), v, val));
    case Formula::Kind::Forall: return Formula::forall(f.var(), substitute_index(f.body(), v, val));
    case Formula::Kind::And: {
      if (f.index_set() == IndexSet::Finite) {
        std::vector<Formula> parts;
        parts.reserve(f.parts().size());
        for (const auto& p : f.parts()) parts.push_back(substitute_index(p, v, val));
        return Formula::conjunction(std::move(parts));
      }
      if (f.var() == v) return f;  // shadowed
      return Formula::big_and(f.index_set(), f.var(), substitute_index(f.body(), v, val));
    }
  }
  return f;
}

Formula instantiate(const Formula& f, const std::string& metavar, Nat value) {
  if (!free_index_vars(f).count(metavar))
    throw PreconditionError("metavariable " + metavar + " is not free in the template body");
  return substitute_index(f, metavar, value);
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::Atomic: {
      std::set<std::string> vs;
      for (const auto& t : f.terms()) term_vars(t, vs);
      for (const auto& v : vs)
        if (!bound.count(v)) out.insert(v);
      return;
    }
    case Formula::Kind::Not: collect_free(f.body(), bound, out); return;
    case Formula::Kind::Forall: {
      bool fresh = bound.insert(f.var()).second;
      collect_free(f.body(), bound, out);
      if (fresh) bound.erase(f.var());
      return;
    }
    case Formula::Kind::And:
      for (const auto& p : f.parts()) collect_free(p, bound, out);
      return;
  }
}

void collect_free_index(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::Atomic: {
      std::set<std::string> vs;
      if (f.index()) f.index()->collect_vars(vs);
      for (const auto& t : f.terms()) term_index_vars(t, vs);
      for (const auto& v : vs)
        if (!bound.count(v)) out.insert(v);
      return;
    }
    case Formula::Kind::Not:
    case Formula::Kind::Forall: collect_free_index(f.body(), bound, out); return;
    case Formula::Kind::And: {
      if (f.index_set() == IndexSet::Finite) {
        for (const auto& p : f.parts()) collect_free_index(p, bound, out);
        return;
      }
      bool fresh = bound.insert(f.var()).second;
      collect_free_index(f.body(), bound, out);
      if (fresh) bound.erase(f.var());
      return;
    }
  }
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> free_index_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free_index(f, bound, out);
  return out;
}

bool is_first_order(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atomic: return true;
    case Formula::Kind::Not:
    case Formula::Kind::Forall: return is_first_order(f.body());
    case Formula::Kind::And:
      if (f.index_set() == IndexSet::Nat) return false;
      for (const auto& p : f.parts())
        if (!is_first_order(p)) return false;
      return true;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Printer. Binders and negations extend to the right, so they are wrapped
// in parentheses whenever they sit inside a binary conjunction.

namespace {

void print_formula(std::ostream& os, const Formula& f);

// True when the printed form ends in a binder whose scope runs to the right.
bool open_right(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Forall: return true;
    case Formula::Kind::Not: return open_right(f.body());
    case Formula::Kind::And: return f.index_set() != IndexSet::Finite;
    default: return false;
  }
}

void print_operand(std::ostream& os, const Formula& f) {
  bool wrap = open_right(f);
  if (wrap) os << "(";
  print_formula(os, f);
  if (wrap) os << ")";
}

void print_formula(std::ostream& os, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atomic: {
      os << f.predicate();
      if (f.index()) os << "_" << index_suffix(*f.index());
      os << "(";
      for (std::size_t i = 0; i < f.terms().size(); ++i) {
        if (i) os << ", ";
        os << to_string(f.terms()[i]);
      }
      os << ")";
      return;
    }
    case Formula::Kind::Not:
      os << "~";
      print_formula(os, f.body());
      return;
    case Formula::Kind::Forall:
      os << "forall " << f.var() << ". ";
      print_formula(os, f.body());
      return;
    case Formula::Kind::And:
      if (f.index_set() != IndexSet::Finite) {
        os << "/\\{" << f.var() << " in " << (f.index_set() == IndexSet::Nat ? "N" : "2") << "} ";
        print_formula(os, f.body());
        return;
      }
      if (f.parts().empty()) {
        os << "true";
        return;
      }
      if (f.parts().size() == 1) {
        // A one-element conjunction has no infix form.
        os << "/\\[";
        print_formula(os, f.parts()[0]);
        os << "]";
        return;
      }
      os << "(";
      for (std::size_t i = 0; i < f.parts().size(); ++i) {
        if (i) os << " /\\ ";
        print_operand(os, f.parts()[i]);
      }
      os << ")";
      return;
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::ostringstream os;
  print_formula(os, f);
  return os.str();
}

// ---------------------------------------------------------------------------
// Classifier. Levels are the least n with f in Pi_n (resp. Sigma_n), with
// Pi_n, Sigma_n both contained in Pi_{n+1} and Sigma_{n+1}.

namespace {

struct Levels {
  int pi = 0;
  int sigma = 0;
};

Levels levels(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atomic: return {};
    case Formula::Kind::Not: {
      Levels l = levels(f.body());
      return {l.sigma, l.pi};
    }
    case Formula::Kind::Forall: return levels(f.body());
    case Formula::Kind::And: {
      if (f.index_set() == IndexSet::Nat) {
        Levels l = levels(f.body());
        int pi = l.sigma + 1;
        return {pi, pi + 1};
      }
      Levels out;
      for (const auto& p : f.parts()) {
        Levels l = levels(p);
        out.pi = std::max(out.pi, l.pi);
        out.sigma = std::max(out.sigma, l.sigma);
      }
      return out;
    }
  }
  return {};
}

}  // namespace

int pi_level(const Formula& f) { return levels(f).pi; }
int sigma_level(const Formula& f) { return levels(f).sigma; }

PrenexClass classify(const Formula& f) {
  Levels l = levels(f);
  if (l.pi == 0 && l.sigma == 0) return PrenexClass::fo();
  int least = std::min(l.pi, l.sigma);
  if (least > 3) return PrenexClass::general();
  if (l.pi <= l.sigma) return PrenexClass::pi(l.pi);
  return PrenexClass::sigma(l.sigma);
}

std::string to_string(const PrenexClass& c) {
  switch (c.kind) {
    case PrenexClass::Kind::FO: return "FO";
    case PrenexClass::Kind::Pi: return "PiN(" + std::to_string(c.level) + ")";
    case PrenexClass::Kind::Sigma: return "SigmaN(" + std::to_string(c.level) + ")";
    case PrenexClass::Kind::General: return "General";
  }
  return "?";
}

}  // namespace boundsem
