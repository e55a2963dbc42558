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

#include "boundsem/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace boundsem {
namespace {

struct Token {
  enum class Kind { Ident, Number, Symbol, End };
  Kind kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  static const char* const kSymbols[] = {"/\\", "\\/", "->", "~", "(", ")", ",", ".", "_",
                                         "^",   "{",   "}",  "+", "*", "[", "]"};
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = s[i];
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::isalpha(c)) {
      std::size_t j = i + 1;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '\'')) ++j;
      out.push_back({Token::Kind::Ident, std::string(s.substr(i, j - i)), i});
      i = j;
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Kind::Number, std::string(s.substr(i, j - i)), i});
      i = j;
      continue;
    }
    bool matched = false;
    for (const char* sym : kSymbols) {
      std::string_view v(sym);
      if (s.substr(i, v.size()) == v) {
        out.push_back({Token::Kind::Symbol, std::string(v), i});
        i += v.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(std::string("unexpected character '") + s[i] + "'", i);
  }
  out.push_back({Token::Kind::End, "", s.size()});
  return out;
}

bool is_keyword(const std::string& w) {
  return w == "forall" || w == "exists" || w == "in" || w == "true" || w == "false" || w == "max";
}

class Parser {
 public:
  Parser(std::string_view text, const Signature* sig, bool allow_free)
      : toks_(tokenize(text)), sig_(sig), allow_free_(allow_free) {}

  Formula formula() { return implication(); }

  IndexExpr iexpr() {
    IndexExpr e = product();
    while (sym("+")) e = IndexExpr::add(e, product());
    return e;
  }

  void expect_end() {
    if (peek().kind != Token::Kind::End) fail("unexpected '" + peek().text + "'");
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_sym(const char* s, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::Symbol && peek(k).text == s;
  }
  bool at_word(const char* w) const { return peek().kind == Token::Kind::Ident && peek().text == w; }
  bool sym(const char* s) {
    if (!at_sym(s)) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().pos); }
  void expect(const char* s) {
    if (!sym(s)) fail(std::string("expected '") + s + "'");
  }
  std::string name(const char* what) {
    if (peek().kind != Token::Kind::Ident || is_keyword(peek().text)) fail(std::string("expected ") + what);
    return toks_[pos_++].text;
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (!sym("->")) return lhs;
    Formula rhs = implication();
    return Formula::negation(Formula::conjunction({lhs, Formula::negation(rhs)}));
  }

  bool infix(const char* op) const { return at_sym(op) && !at_sym("{", 1) && !at_sym("[", 1); }

  Formula disjunction() {
    Formula first = conjunction();
    if (!infix("\\/")) return first;
    std::vector<Formula> parts{Formula::negation(first)};
    while (infix("\\/")) {
      ++pos_;
      parts.push_back(Formula::negation(conjunction()));
    }
    return Formula::negation(Formula::conjunction(std::move(parts)));
  }

  Formula conjunction() {
    Formula first = unary();
    if (!infix("/\\")) return first;
    std::vector<Formula> parts{first};
    while (infix("/\\")) {
      ++pos_;
      parts.push_back(unary());
    }
    return Formula::conjunction(std::move(parts));
  }

  Formula binder_and(bool disjunctive) {
    expect("{");
    std::string mv = name("index metavariable");
    if (!at_word("in")) fail("expected 'in'");
    ++pos_;
    IndexSet set;
    if (at_word("N")) {
      set = IndexSet::Nat;
    } else if (peek().kind == Token::Kind::Number && peek().text == "2") {
      set = IndexSet::Pair;
    } else {
      fail("expected index set 'N' or '2'");
    }
    ++pos_;
    expect("}");
    bound_index_.push_back(mv);
    Formula body = formula();
    bound_index_.pop_back();
    if (!disjunctive) return Formula::big_and(set, mv, body);
    return Formula::negation(Formula::big_and(set, mv, Formula::negation(body)));
  }

  Formula unary() {
    if (sym("~")) return Formula::negation(unary());
    if (at_word("forall") || at_word("exists")) {
      bool ex = peek().text == "exists";
      ++pos_;
      std::string v = name("variable");
      if (sig_->find(v)) fail("cannot quantify over symbol " + v);
      expect(".");
      Formula body = formula();
      if (!ex) return Formula::forall(v, body);
      return Formula::negation(Formula::forall(v, Formula::negation(body)));
    }
    if (at_sym("/\\") && at_sym("[", 1)) {
      pos_ += 2;
      Formula f = formula();
      expect("]");
      return Formula::conjunction({f});
    }
    if (sym("/\\")) return binder_and(false);
    if (sym("\\/")) return binder_and(true);
    if (sym("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    if (at_word("true")) {
      ++pos_;
      return Formula::verum();
    }
    if (at_word("false")) {
      ++pos_;
      return Formula::falsum();
    }
    return atom();
  }

  std::optional<IndexExpr> index_suffix(const SymbolInfo& s) {
    if (!at_sym("_")) {
      if (s.indexed) fail("indexed symbol " + s.name + " needs an index");
      return std::nullopt;
    }
    if (!s.indexed) fail("symbol " + s.name + " is not indexed");
    ++pos_;
    return index_atom();
  }

  IndexExpr index_atom() {
    if (sym("{")) {
      IndexExpr e = iexpr();
      expect("}");
      return e;
    }
    if (peek().kind == Token::Kind::Number) return number();
    if (peek().kind == Token::Kind::Ident && !is_keyword(peek().text)) return ivar();
    fail("expected index");
  }

  IndexExpr number() {
    const Token& t = toks_[pos_];
    Nat v = 0;
    auto r = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (r.ec != std::errc()) fail("number out of range");
    ++pos_;
    return IndexExpr::lit(v);
  }

  IndexExpr ivar() {
    const Token& t = toks_[pos_];
    if (!allow_free_ && std::find(bound_index_.begin(), bound_index_.end(), t.text) == bound_index_.end())
      throw ParseError("free index metavariable " + t.text, t.pos);
    ++pos_;
    return IndexExpr::var(t.text);
  }

  IndexExpr product() {
    IndexExpr e = factor();
    while (sym("*")) e = IndexExpr::mul(e, factor());
    return e;
  }

  IndexExpr factor() {
    if (peek().kind == Token::Kind::Number) return number();
    if (at_word("max")) {
      ++pos_;
      expect("(");
      IndexExpr a = iexpr();
      expect(",");
      IndexExpr b = iexpr();
      expect(")");
      return IndexExpr::max(a, b);
    }
    if (sym("(")) {
      IndexExpr e = iexpr();
      expect(")");
      return e;
    }
    if (peek().kind == Token::Kind::Ident && !is_keyword(peek().text)) return ivar();
    fail("expected index expression");
  }

  std::vector<Term> args(const std::string& owner, std::size_t arity) {
    expect("(");
    std::vector<Term> out;
    if (!at_sym(")")) {
      out.push_back(term());
      while (sym(",")) out.push_back(term());
    }
    std::size_t close = peek().pos;
    expect(")");
    if (out.size() != arity)
      throw ParseError("arity mismatch for " + owner + ": expected " + std::to_string(arity) + ", got " +
                           std::to_string(out.size()),
                       close);
    return out;
  }

  Term term() {
    std::size_t at = peek().pos;
    std::string n = name("term");
    const SymbolInfo* s = sig_->find(n);
    if (!s) {
      if (at_sym("(") || at_sym("_") || at_sym("^")) throw ParseError("undeclared symbol " + n, at);
      return Term::variable(n);
    }
    switch (s->sort) {
      case SymbolInfo::Sort::Constant: return Term::constant(n, index_suffix(*s));
      case SymbolInfo::Sort::Function: {
        auto idx = index_suffix(*s);
        std::optional<IndexExpr> iter;
        if (sym("^")) {
          if (s->arity != 1) throw ParseError("iteration on non-unary function " + n, at);
          iter = index_atom();
        }
        return Term::apply(n, args(n, s->arity), std::move(idx), std::move(iter));
      }
      case SymbolInfo::Sort::Predicate: break;
    }
    throw ParseError("predicate " + n + " used as a term", at);
  }

  Formula atom() {
    std::size_t at = peek().pos;
    if (peek().kind != Token::Kind::Ident || is_keyword(peek().text)) fail("expected formula");
    std::string n = toks_[pos_++].text;
    const SymbolInfo* s = sig_->find(n);
    if (!s) throw ParseError("undeclared symbol " + n, at);
    if (s->sort != SymbolInfo::Sort::Predicate) throw ParseError(n + " is not a predicate", at);
    auto idx = index_suffix(*s);
    return Formula::atomic(n, args(n, s->arity), std::move(idx));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Signature* sig_;
  bool allow_free_;
  std::vector<std::string> bound_index_;
};

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig, const ParseOptions& options) {
  Parser p(text, &sig, options.allow_free_index_vars);
  Formula f = p.formula();
  p.expect_end();
  return f;
}

IndexExpr parse_index_expr(std::string_view text) {
  Signature none;
  Parser p(text, &none, true);
  IndexExpr e = p.iexpr();
  p.expect_end();
  return e;
}

Signature parse_signature(std::string_view text) {
  Signature sig;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    std::size_t lead = 0;
    while (lead < item.size() && std::isspace(static_cast<unsigned char>(item[lead]))) ++lead;
    item.remove_prefix(lead);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    const std::size_t at = pos + lead;
    pos = end + 1;
    if (item.empty()) {
      if (end == text.size()) break;
      throw ParseError("empty signature item", at);
    }
    if (item == "metric") {
      sig = sig.merged(metric_signature());
      continue;
    }
    if (item == "cycle") {
      sig = sig.merged(cycle_signature());
      continue;
    }
    std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected pred:, fn:, const:, metric or cycle", at);
    std::string_view sort = item.substr(0, colon);
    std::string_view rest = item.substr(colon + 1);
    std::size_t arity = 0;
    if (sort != "const") {
      std::size_t slash = rest.find('/');
      if (slash == std::string_view::npos) throw ParseError("expected /arity", at + colon + 1 + rest.size());
      auto digits = rest.substr(slash + 1);
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), arity);
      if (ec != std::errc() || p != digits.data() + digits.size())
        throw ParseError("bad arity", at + colon + 2 + slash);
      rest = rest.substr(0, slash);
    }
    bool indexed = rest.size() > 2 && rest.substr(rest.size() - 2) == "_n";
    if (indexed) rest.remove_suffix(2);
    if (rest.empty() || !std::isalpha(static_cast<unsigned char>(rest[0])))
      throw ParseError("bad symbol name", at + colon + 1);
    std::string name(rest);
    Signature one;
    if (sort == "pred") one.predicate(name, arity, indexed);
    else if (sort == "fn") one.function(name, arity, indexed);
    else if (sort == "const") one.constant(name, indexed);
    else throw ParseError("unknown sort '" + std::string(sort) + "'", at);
    sig = sig.merged(one);
  }
  return sig;
}

}  // namespace boundsem
