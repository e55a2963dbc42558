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

#include "boundsem/structure.hpp"

#include <charconv>

namespace boundsem {

Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
      throw Error("malformed rational '" + std::string(text) + "'");
    return v;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) throw Error("zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// ---------------------------------------------------------------------------

DistanceMatrix::DistanceMatrix(std::vector<std::vector<Rational>> rows) : rows_(std::move(rows)) {
  const std::size_t n = rows_.size();
  for (std::size_t x = 0; x < n; ++x) {
    if (rows_[x].size() != n) throw Error("distance matrix is not square");
    if (rows_[x][x] != Rational(0)) throw Error("distance matrix has a non-zero diagonal entry at " + std::to_string(x));
    for (std::size_t y = 0; y < n; ++y) {
      const Rational& d = rows_[x][y];
      if (d < Rational(0)) throw Error("negative distance at (" + std::to_string(x) + "," + std::to_string(y) + ")");
      if (d > Rational(1)) throw Error("distance above 1 at (" + std::to_string(x) + "," + std::to_string(y) + ")");
    }
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < x; ++y)
      if (rows_[x][y] != rows_[y][x])
        throw Error("distance matrix is not symmetric at (" + std::to_string(x) + "," + std::to_string(y) + ")");
}

bool DistanceMatrix::below(Nat n, Element x, Element y) const {
  if (n == 0) return true;
  const Rational& d = rows_[x][y];
  // d < 1/n  <=>  num * n < den, with num, den >= 0.
  unsigned __int128 lhs = static_cast<unsigned __int128>(d.numerator()) * n;
  return lhs < static_cast<unsigned __int128>(d.denominator());
}

Element SequenceRule::at(Nat k) const {
  if (k < prefix.size()) return prefix[k];
  if (tail == Tail::Const) return static_cast<Element>(param);
  Nat start = prefix.size() - param;
  return prefix[start + (k - start) % param];
}

void SequenceRule::validate(std::size_t universe) const {
  for (Element v : prefix)
    if (v >= universe) throw Error("sequence value " + std::to_string(v) + " outside the universe");
  if (tail == Tail::Const) {
    if (param >= universe) throw Error("sequence tail constant outside the universe");
  } else if (param == 0 || param > prefix.size()) {
    throw Error("sequence period must be between 1 and the prefix length");
  }
}

// ---------------------------------------------------------------------------

Structure::Structure(std::size_t size, std::string label) : size_(size), label_(std::move(label)) {
  if (size == 0) throw Error("structure " + label_ + ": empty universe");
}

namespace {

std::string symbol_name(const std::string& family, std::optional<Nat> index) {
  return index ? family + "_" + std::to_string(*index) : family;
}

std::string tuple_text(const std::vector<Element>& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(t[i]);
  }
  return out + ")";
}

std::size_t checked_power(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(out, base, &out) || out > (std::size_t(1) << 28))
      throw Error("table too large");
  }
  return out;
}

}  // namespace

std::size_t Structure::offset(const Element* args, std::size_t n, const std::string& what) const {
  std::size_t off = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (args[i] >= size_) throw Error("structure " + label_ + ": element out of range in " + what);
    off = off * size_ + args[i];
  }
  return off;
}

void Structure::add_relation(const std::string& family, std::optional<Nat> index, std::size_t arity,
                             const std::vector<std::vector<Element>>& tuples) {
  Relation& r = relations_[{family, index}];
  if (r.bits.empty()) {
    r.arity = arity;
    r.bits.assign(checked_power(size_, arity), false);
  } else if (r.arity != arity) {
    throw Error("structure " + label_ + ": arity clash for " + symbol_name(family, index));
  }
  for (const auto& t : tuples) {
    if (t.size() != arity)
      throw Error("structure " + label_ + ": row " + tuple_text(t) + " of " + symbol_name(family, index) +
                  " has the wrong arity");
    for (Element e : t)
      if (e >= size_)
        throw Error("structure " + label_ + ": row " + tuple_text(t) + " of " + symbol_name(family, index) +
                    " references element " + std::to_string(e) + " outside universe of size " +
                    std::to_string(size_));
    r.bits[offset(t.data(), t.size(), symbol_name(family, index))] = true;
  }
}

void Structure::set_function(const std::string& family, std::optional<Nat> index, std::size_t arity,
                             std::vector<Element> table) {
  if (table.size() != checked_power(size_, arity))
    throw Error("structure " + label_ + ": function " + symbol_name(family, index) + " is not total");
  for (Element v : table)
    if (v >= size_)
      throw Error("structure " + label_ + ": function " + symbol_name(family, index) + " value " +
                  std::to_string(v) + " outside the universe");
  functions_[{family, index}] = Function{arity, std::move(table)};
}

void Structure::set_constant(const std::string& family, std::optional<Nat> index, Element value) {
  if (value >= size_)
    throw Error("structure " + label_ + ": constant " + symbol_name(family, index) + " outside the universe");
  constants_[{family, index}] = value;
}

void Structure::set_distance_rule(const std::string& family, DistanceMatrix d) {
  if (d.size() != size_) throw Error("structure " + label_ + ": distance matrix size differs from universe");
  distances_[family] = std::move(d);
}

void Structure::set_sequence_rule(const std::string& family, SequenceRule rule) {
  try {
    rule.validate(size_);
  } catch (const Error& e) {
    throw Error("structure " + label_ + ": " + e.what());
  }
  sequences_[family] = std::move(rule);
}

void Structure::missing(const std::string& family, std::optional<Nat> index) const {
  throw Error("structure " + label_ + ": no table entry or rule for " + symbol_name(family, index));
}

bool Structure::holds(const std::string& family, std::optional<Nat> index, const Element* args,
                      std::size_t n) const {
  auto it = relations_.find(Key{family, index});
  if (it != relations_.end()) {
    if (it->second.arity != n) throw Error("structure " + label_ + ": arity clash for " + symbol_name(family, index));
    return it->second.bits[offset(args, n, symbol_name(family, index))];
  }
  if (index && n == 2) {
    auto d = distances_.find(family);
    if (d != distances_.end()) {
      offset(args, n, symbol_name(family, index));
      return d->second.below(*index, args[0], args[1]);
    }
  }
  missing(family, index);
}

Element Structure::apply(const std::string& family, std::optional<Nat> index, const Element* args,
                         std::size_t n) const {
  auto it = functions_.find(Key{family, index});
  if (it == functions_.end()) missing(family, index);
  if (it->second.arity != n) throw Error("structure " + label_ + ": arity clash for " + symbol_name(family, index));
  return it->second.table[offset(args, n, symbol_name(family, index))];
}

Element Structure::constant(const std::string& family, std::optional<Nat> index) const {
  auto it = constants_.find(Key{family, index});
  if (it != constants_.end()) return it->second;
  if (index) {
    auto s = sequences_.find(family);
    if (s != sequences_.end()) return s->second.at(*index);
  }
  missing(family, index);
}

const DistanceMatrix* Structure::distance_rule(const std::string& family) const {
  auto it = distances_.find(family);
  return it == distances_.end() ? nullptr : &it->second;
}

const SequenceRule* Structure::sequence_rule(const std::string& family) const {
  auto it = sequences_.find(family);
  return it == sequences_.end() ? nullptr : &it->second;
}

void Structure::validate() const {
  for (const auto& [key, rel] : relations_) {
    if (!key.second || rel.arity != 2) continue;
    auto d = distances_.find(key.first);
    if (d == distances_.end()) continue;
    for (Element x = 0; x < size_; ++x)
      for (Element y = 0; y < size_; ++y)
        if (rel.bits[x * size_ + y] != d->second.below(*key.second, x, y))
          throw Error("structure " + label_ + ": table for " + symbol_name(key.first, key.second) +
                      " disagrees with the distance rule at (" + std::to_string(x) + "," + std::to_string(y) + ")");
  }
  for (const auto& [key, value] : constants_) {
    if (!key.second) continue;
    auto s = sequences_.find(key.first);
    if (s != sequences_.end() && s->second.at(*key.second) != value)
      throw Error("structure " + label_ + ": constant " + symbol_name(key.first, key.second) +
                  " disagrees with the sequence rule");
  }
}

// ---------------------------------------------------------------------------
// First-order evaluation

namespace {

class Evaluator {
 public:
  Evaluator(const Structure& m, const Env& env) : m_(m) {
    for (const auto& [k, v] : env) stack_.emplace_back(k, v);
  }

  Element term(const Term& t) {
    switch (t.kind) {
      case Term::Kind::Var:
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it)
          if (it->first == t.name) return it->second;
        throw Error("unbound variable " + t.name);
      case Term::Kind::Const: return m_.constant(t.name, idx(t.index));
      case Term::Kind::App: {
        Element buf[8];
        std::vector<Element> big;
        Element* args = buf;
        if (t.args.size() > 8) {
          big.resize(t.args.size());
          args = big.data();
        }
        for (std::size_t i = 0; i < t.args.size(); ++i) args[i] = term(t.args[i]);
        auto index = idx(t.index);
        if (!t.iterate) return m_.apply(t.name, index, args, t.args.size());
        return iterate(t.name, index, args[0], t.iterate->evaluate());
      }
    }
    return 0;
  }

  bool formula(const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Atomic: {
        Element buf[8];
        std::vector<Element> big;
        Element* args = buf;
        if (f.terms().size() > 8) {
          big.resize(f.terms().size());
          args = big.data();
        }
        for (std::size_t i = 0; i < f.terms().size(); ++i) args[i] = term(f.terms()[i]);
        return m_.holds(f.predicate(), idx(f.index()), args, f.terms().size());
      }
      case Formula::Kind::Not: return !formula(f.body());
      case Formula::Kind::Forall: {
        stack_.emplace_back(f.var(), 0);
        bool ok = true;
        for (Element u = 0; u < m_.size() && ok; ++u) {
          stack_.back().second = u;
          ok = formula(f.body());
        }
        stack_.pop_back();
        return ok;
      }
      case Formula::Kind::And: {
        if (f.index_set() == IndexSet::Nat) throw PreconditionError("eval_fo: countable conjunction in " + to_string(f));
        if (f.index_set() == IndexSet::Pair) return formula(f.component(0)) && formula(f.component(1));
        for (const auto& p : f.parts())
          if (!formula(p)) return false;
        return true;
      }
    }
    return false;
  }

 private:
  static std::optional<Nat> idx(const std::optional<IndexExpr>& e) {
    if (!e) return std::nullopt;
    return e->evaluate();
  }

  // f^k(x) for unary f, jumping over the eventual cycle for large k.
  Element iterate(const std::string& fn, std::optional<Nat> index, Element x, Nat k) {
    std::vector<Element> path;
    std::vector<std::size_t> seen(m_.size(), SIZE_MAX);
    for (Nat step = 0; step < k; ++step) {
      if (seen[x] != SIZE_MAX) {
        Nat mu = seen[x];
        Nat lambda = step - mu;
        return path[mu + (k - mu) % lambda];
      }
      seen[x] = path.size();
      path.push_back(x);
      x = m_.apply(fn, index, &x, 1);
    }
    return x;
  }

  const Structure& m_;
  std::vector<std::pair<std::string, Element>> stack_;
};

}  // namespace

bool eval_fo(const Structure& m, const Formula& f, const Env& env) {
  Evaluator ev(m, env);
  return ev.formula(f);
}

Element eval_term(const Structure& m, const Term& t, const Env& env) {
  Evaluator ev(m, env);
  return ev.term(t);
}

}  // namespace boundsem
