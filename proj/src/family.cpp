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

#include "boundsem/family.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace boundsem {

void FamilySpec::validate() const {
  if (structures.empty()) throw Error("family is empty");
  if (tail_start >= structures.size())
    throw Error("tail-start " + std::to_string(tail_start) + " is not below the prefix length " +
                std::to_string(structures.size()));
  for (const auto& s : structures) s.validate();
}

// ---------------------------------------------------------------------------
// Generators

Structure gen_cycle(Nat n, const std::vector<std::vector<Element>>& parts) {
  if (n == 0) throw Error("gen_cycle: empty universe");
  std::vector<int> owner(n, -1);
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (Element x : parts[i]) {
      if (x >= n) throw Error("gen_cycle: element " + std::to_string(x) + " outside 0.." + std::to_string(n - 1));
      if (owner[x] >= 0) throw Error("gen_cycle: element " + std::to_string(x) + " lies in two parts");
      owner[x] = static_cast<int>(i);
    }
  for (Nat x = 0; x < n; ++x)
    if (owner[x] < 0) throw Error("gen_cycle: element " + std::to_string(x) + " lies in no part");
  Structure m(n, "cycle-" + std::to_string(n));
  std::vector<Element> succ(n);
  for (Nat x = 0; x < n; ++x) succ[x] = static_cast<Element>((x + 1) % n);
  m.set_function("S", std::nullopt, 1, std::move(succ));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::vector<std::vector<Element>> rows;
    for (Element x : parts[i]) rows.push_back({x});
    m.add_relation("U", i, 1, rows);
  }
  return m;
}

namespace {

DistanceMatrix two_point_metric() {
  return DistanceMatrix({{Rational(0), Rational(1)}, {Rational(1), Rational(0)}});
}

}  // namespace

Structure gen_sequence_space(Nat i, SequenceKind kind, const CustomSpace* custom) {
  SequenceRule rule;
  DistanceMatrix d;
  std::string label;
  switch (kind) {
    case SequenceKind::DelayedAlternation: {
      rule.prefix.assign(i, 1);
      rule.prefix.push_back(i % 2 == 0 ? 1 : 0);
      rule.prefix.push_back(i % 2 == 0 ? 0 : 1);
      rule.tail = SequenceRule::Tail::Periodic;
      rule.param = 2;
      d = two_point_metric();
      label = "paper-" + std::to_string(i);
      break;
    }
    case SequenceKind::Parity:
      rule.prefix = {0, 1};
      rule.tail = SequenceRule::Tail::Periodic;
      rule.param = 2;
      d = two_point_metric();
      label = "parity-" + std::to_string(i);
      break;
    case SequenceKind::Custom:
      if (!custom) throw Error("gen_sequence_space: custom kind needs a table");
      rule = custom->sequence;
      d = custom->distance;
      label = "custom-" + std::to_string(i);
      break;
  }
  Structure m(d.size(), label);
  m.set_distance_rule("D", std::move(d));
  m.set_sequence_rule("c", std::move(rule));
  return m;
}

FamilySpec sequence_family(SequenceKind kind, Nat first, Nat last, std::size_t tail_start) {
  FamilySpec fam;
  for (Nat i = first; i <= last; ++i) fam.structures.push_back(gen_sequence_space(i, kind));
  fam.tail_start = tail_start;
  fam.validate();
  return fam;
}

// ---------------------------------------------------------------------------
// Family files

namespace {

struct FTok {
  std::string text;
  std::size_t line;
};

std::vector<FTok> tokenize_family(std::string_view s) {
  std::vector<FTok> out;
  std::size_t line = 1;
  std::size_t i = 0;
  auto special = [&](std::size_t j) {
    char c = s[j];
    if (c == '{' || c == '}' || c == '(' || c == ')' || c == '[' || c == ']' || c == ',') return 1;
    if (s.substr(j, 2) == "->" || s.substr(j, 2) == "..") return 2;
    return 0;
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    if (int n = special(i)) {
      out.push_back({std::string(s.substr(i, n)), line});
      i += n;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '#' && !special(j)) ++j;
    out.push_back({std::string(s.substr(i, j - i)), line});
    i = j;
  }
  return out;
}

class FamilyParser {
 public:
  explicit FamilyParser(std::string_view text) : toks_(tokenize_family(text)) {}

  FamilySpec run() {
    FamilySpec fam;
    bool tail_given = false;
    while (!done()) {
      std::string kw = next().text;
      if (kw == "tail-start") {
        fam.tail_start = number();
        tail_given = true;
      } else if (kw == "structure") {
        flush(fam);
        label_ = word("structure label");
        universe_.reset();
        pending_.clear();
        open_ = true;
      } else if (kw == "universe") {
        need_open(kw);
        universe_ = number();
      } else if (kw == "pred" || kw == "fn" || kw == "const" || kw == "rule") {
        need_open(kw);
        --pos_;
        pending_.push_back(statement());
      } else if (kw == "cycle") {
        flush(fam);
        cycles(fam);
      } else if (kw == "seqspace") {
        flush(fam);
        seqspaces(fam);
      } else {
        fail("unknown directive '" + kw + "'", prev_line());
      }
    }
    flush(fam);
    if (!tail_given) fam.tail_start = 0;
    if (fam.structures.empty()) throw ParseError("family file defines no structures", line());
    if (fam.tail_start >= fam.structures.size())
      throw ParseError("tail-start " + std::to_string(fam.tail_start) + " is not below the prefix length " +
                           std::to_string(fam.structures.size()),
                       1);
    for (const auto& s : fam.structures) s.validate();
    return fam;
  }

 private:
  // Statements inside a structure are applied once its universe is known.
  struct Statement {
    std::size_t first;
    std::size_t last;
  };

  bool done() const { return pos_ >= toks_.size(); }
  std::size_t line() const { return done() ? (toks_.empty() ? 1 : toks_.back().line) : toks_[pos_].line; }
  std::size_t prev_line() const { return toks_[pos_ - 1].line; }
  [[noreturn]] void fail(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }
  const FTok& next() {
    if (done()) fail("unexpected end of file", line());
    return toks_[pos_++];
  }
  bool at(const char* s) const { return !done() && toks_[pos_].text == s; }
  void expect(const char* s) {
    if (!at(s)) fail(std::string("expected '") + s + "'", line());
    ++pos_;
  }
  std::string word(const char* what) {
    if (done()) fail(std::string("expected ") + what, line());
    return next().text;
  }
  Nat number() {
    std::size_t l = line();
    std::string t = word("number");
    Nat v = 0;
    auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size()) fail("expected a number, got '" + t + "'", l);
    return v;
  }
  void need_open(const std::string& kw) const {
    if (!open_) fail("'" + kw + "' outside a structure stanza", prev_line());
  }

  Statement statement() {
    std::size_t first = pos_;
    ++pos_;
    static const char* const kKeywords[] = {"tail-start", "structure", "universe", "pred", "fn",
                                            "const",      "rule",      "cycle",    "seqspace"};
    int depth = 0;
    while (!done()) {
      const std::string& t = toks_[pos_].text;
      if (t == "{" || t == "[") ++depth;
      if (t == "}" || t == "]") --depth;
      if (depth == 0 && toks_[pos_ - 1].text != "tail") {
        bool kw = false;
        for (const char* k : kKeywords) kw = kw || t == k;
        if (kw) break;
      }
      ++pos_;
    }
    return {first, pos_};
  }

  static std::pair<std::string, std::optional<Nat>> split_symbol(const std::string& s, std::size_t l) {
    auto u = s.find('_');
    if (u == std::string::npos) return {s, std::nullopt};
    Nat v = 0;
    auto r = std::from_chars(s.data() + u + 1, s.data() + s.size(), v);
    if (u == 0 || r.ec != std::errc() || r.ptr != s.data() + s.size())
      throw ParseError("malformed symbol '" + s + "'", l);
    return {s.substr(0, u), v};
  }

  Element element(std::size_t universe) {
    std::size_t l = line();
    Nat v = number();
    if (v >= universe)
      fail("element " + std::to_string(v) + " outside universe of size " + std::to_string(universe) + " in structure " +
               label_,
           l);
    return static_cast<Element>(v);
  }

  // "(a,b,...)" or a bare element.
  std::vector<Element> tuple(std::size_t universe) {
    std::vector<Element> t;
    std::size_t l = line();
    if (!at("(")) {
      t.push_back(element(universe));
      return t;
    }
    ++pos_;
    std::string row = "(";
    while (!at(")")) {
      if (!t.empty()) {
        expect(",");
        row += ",";
      }
      Nat v = number();
      row += std::to_string(v);
      t.push_back(static_cast<Element>(v));
      if (done()) break;
    }
    expect(")");
    row += ")";
    for (Element e : t)
      if (e >= universe)
        fail("row " + row + " references element " + std::to_string(e) + " outside universe of size " +
                 std::to_string(universe) + " in structure " + label_,
             l);
    return t;
  }

  void apply(Structure& m, const Statement& st) {
    std::size_t save = pos_;
    pos_ = st.first;
    std::string kw = next().text;
    std::size_t l = prev_line();
    try {
      if (kw == "pred") pred(m);
      else if (kw == "fn") fn(m);
      else if (kw == "const") constant(m);
      else rule(m);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(e.what(), l);
    }
    if (pos_ != st.last) fail("unexpected '" + toks_[pos_].text + "'", line());
    pos_ = save;
  }

  void pred(Structure& m) {
    std::size_t l = line();
    std::string name = word("predicate");
    std::optional<std::size_t> arity;
    if (auto slash = name.find('/'); slash != std::string::npos) {
      arity = std::stoul(name.substr(slash + 1));
      name = name.substr(0, slash);
    }
    auto [family, index] = split_symbol(name, l);
    expect("{");
    std::vector<std::vector<Element>> rows;
    while (!at("}")) {
      if (done()) fail("unterminated table", l);
      rows.push_back(tuple(m.size()));
      if (at(",")) ++pos_;
    }
    expect("}");
    if (!arity) {
      if (rows.empty()) fail("empty table for " + name + " needs an explicit arity (" + name + "/k)", l);
      arity = rows[0].size();
    }
    m.add_relation(family, index, *arity, rows);
  }

  void fn(Structure& m) {
    std::size_t l = line();
    auto [family, index] = split_symbol(word("function"), l);
    expect("{");
    std::map<std::vector<Element>, Element> graph;
    std::optional<std::size_t> arity;
    while (!at("}")) {
      if (done()) fail("unterminated table", l);
      auto args = tuple(m.size());
      expect("->");
      Element v = element(m.size());
      if (arity && *arity != args.size()) fail("mixed arities in function " + family, l);
      arity = args.size();
      graph[args] = v;
      if (at(",")) ++pos_;
    }
    expect("}");
    if (!arity) fail("empty function table for " + family, l);
    std::vector<Element> table;
    std::vector<Element> args(*arity, 0);
    while (true) {
      auto it = graph.find(args);
      if (it == graph.end()) fail("function " + family + " is not total in structure " + label_, l);
      table.push_back(it->second);
      std::size_t k = *arity;
      while (k > 0 && ++args[k - 1] == m.size()) args[--k] = 0;
      if (k == 0) break;
    }
    m.set_function(family, index, *arity, std::move(table));
  }

  void constant(Structure& m) {
    std::size_t l = line();
    auto [family, index] = split_symbol(word("constant"), l);
    m.set_constant(family, index, element(m.size()));
  }

  std::vector<Nat> bracket_numbers() {
    expect("[");
    std::vector<Nat> out;
    while (!at("]")) {
      if (done()) fail("unterminated list", line());
      out.push_back(number());
    }
    expect("]");
    return out;
  }

  void rule(Structure& m) {
    std::size_t l = line();
    std::string kind = word("rule kind");
    if (kind == "dist") {
      std::vector<std::vector<Rational>> rows;
      while (at("[")) {
        ++pos_;
        rows.emplace_back();
        while (!at("]")) {
          if (done()) fail("unterminated row", l);
          rows.back().push_back(parse_rational(next().text));
        }
        ++pos_;
      }
      m.set_distance_rule("D", DistanceMatrix(std::move(rows)));
    } else if (kind == "seq") {
      std::string family = word("constant family");
      if (word("'prefix'") != "prefix") fail("expected 'prefix'", l);
      SequenceRule r;
      for (Nat v : bracket_numbers()) r.prefix.push_back(static_cast<Element>(v));
      if (word("'tail'") != "tail") fail("expected 'tail'", l);
      std::string tail = word("tail kind");
      if (tail == "periodic") r.tail = SequenceRule::Tail::Periodic;
      else if (tail == "const") r.tail = SequenceRule::Tail::Const;
      else fail("unknown tail kind '" + tail + "'", l);
      r.param = number();
      m.set_sequence_rule(family, std::move(r));
    } else {
      fail("unknown rule '" + kind + "'", l);
    }
  }

  std::pair<Nat, Nat> range() {
    Nat a = number();
    expect("..");
    Nat b = number();
    if (b < a) fail("empty range", prev_line());
    return {a, b};
  }

  void cycles(FamilySpec& fam) {
    std::size_t l = prev_line();
    auto [a, b] = range();
    if (word("'coloring'") != "coloring") fail("expected 'coloring'", l);
    std::string kind = word("coloring kind");
    Nat r = 1;
    if (kind == "mod" || kind == "blocks") r = number();
    else if (kind != "single") fail("unknown coloring '" + kind + "'", l);
    if (r == 0) fail("coloring needs at least one colour", l);
    if (a == 0) fail("cycle sizes start at 1", l);
    for (Nat n = a; n <= b; ++n) {
      std::vector<std::vector<Element>> parts(r);
      for (Nat x = 0; x < n; ++x) parts[kind == "mod" ? x % r : kind == "blocks" ? x * r / n : 0].push_back(x);
      fam.structures.push_back(gen_cycle(n, parts));
    }
  }

  void seqspaces(FamilySpec& fam) {
    std::size_t l = prev_line();
    std::string kind = word("sequence kind");
    SequenceKind k;
    if (kind == "paper") k = SequenceKind::DelayedAlternation;
    else if (kind == "parity") k = SequenceKind::Parity;
    else fail("unknown sequence kind '" + kind + "'", l);
    auto [a, b] = range();
    for (Nat i = a; i <= b; ++i) fam.structures.push_back(gen_sequence_space(i, k));
  }

  void flush(FamilySpec& fam) {
    if (!open_) return;
    open_ = false;
    if (!universe_) fail("structure " + label_ + " has no universe", line());
    Structure m(*universe_, label_);
    for (const auto& st : pending_) apply(m, st);
    try {
      m.validate();
    } catch (const Error& e) {
      fail(e.what(), toks_[pending_.empty() ? 0 : pending_.back().first].line);
    }
    fam.structures.push_back(std::move(m));
  }

  std::vector<FTok> toks_;
  std::size_t pos_ = 0;
  bool open_ = false;
  std::string label_;
  std::optional<Nat> universe_;
  std::vector<Statement> pending_;
};

}  // namespace

FamilySpec parse_family(std::string_view text) { return FamilyParser(text).run(); }

FamilySpec load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open family file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_family(ss.str());
}

}  // namespace boundsem
