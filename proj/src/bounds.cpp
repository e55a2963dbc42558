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

#include "boundsem/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

#include "boundsem/error.hpp"

namespace boundsem {

MonotoneFn::MonotoneFn(std::vector<std::pair<Nat, Nat>> breakpoints) : bps_(std::move(breakpoints)) {
  if (bps_.empty() || bps_[0].first != 0) throw Error("monotone function must start at threshold 0");
  for (std::size_t i = 1; i < bps_.size(); ++i) {
    if (bps_[i].first <= bps_[i - 1].first) throw Error("monotone function thresholds must increase");
    if (bps_[i].second < bps_[i - 1].second) throw Error("monotone function values must not decrease");
  }
}

Nat MonotoneFn::operator()(Nat m) const {
  auto it = std::upper_bound(bps_.begin(), bps_.end(), m, [](Nat x, const auto& bp) { return x < bp.first; });
  return std::prev(it)->second;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Parses a natural at text[pos...] and advances pos; `base` offsets error positions.
Nat read_nat(std::string_view text, std::size_t& pos, std::size_t base) {
  while (pos < text.size() && text[pos] == ' ') ++pos;
  Nat v = 0;
  auto [end, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
  if (ec != std::errc()) throw ParseError("expected a natural number", base + pos);
  pos = static_cast<std::size_t>(end - text.data());
  while (pos < text.size() && text[pos] == ' ') ++pos;
  return v;
}

void expect(std::string_view text, std::size_t& pos, std::string_view word, std::size_t base) {
  if (text.substr(pos, word.size()) != word) throw ParseError("expected '" + std::string(word) + "'", base + pos);
  pos += word.size();
}

MonotoneFn parse_monotone_at(std::string_view text, std::size_t base) {
  std::size_t pos = 0;
  expect(text, pos, "mono:", base);
  std::vector<std::pair<Nat, Nat>> bps;
  while (true) {
    Nat t = read_nat(text, pos, base);
    expect(text, pos, "->", base);
    Nat v = read_nat(text, pos, base);
    bps.emplace_back(t, v);
    if (pos == text.size()) break;
    expect(text, pos, ",", base);
  }
  try {
    return MonotoneFn(std::move(bps));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what(), base);
  }
}

std::vector<Nat> upto(Nat n) {
  std::vector<Nat> out(n + 1);
  for (Nat i = 0; i <= n; ++i) out[i] = i;
  return out;
}

// "0-3,5,7-9"
std::string ranges(const std::vector<std::size_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size();) {
    std::size_t j = i;
    while (j + 1 < xs.size() && xs[j + 1] == xs[j] + 1) ++j;
    if (!out.empty()) out += ",";
    out += std::to_string(xs[i]);
    if (j > i) out += "-" + std::to_string(xs[j]);
    i = j + 1;
  }
  return out.empty() ? "-" : out;
}

// Evaluates row(i) for every structure on `threads` workers; rows come back
// in index order. Errors name the structure.
template <typename Row>
std::vector<Row> per_structure(const FamilySpec& fam, unsigned threads, std::vector<double>& seconds,
                               const std::function<Row(const Structure&)>& row) {
  const std::size_t n = fam.structures.size();
  std::vector<Row> rows(n);
  std::vector<std::exception_ptr> errors(n);
  seconds.assign(n, 0.0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      auto t0 = std::chrono::steady_clock::now();
      try {
        rows[i] = row(fam.structures[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
      seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  if (threads == 0) threads = default_threads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    const std::string& label = fam.structures[i].label();
    std::string name = label.empty() ? "#" + std::to_string(i) : label;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const PreconditionError& e) {
      throw PreconditionError("structure " + name + ": " + e.what());
    } catch (const std::exception& e) {
      throw Error("structure " + name + ": " + e.what());
    }
  }
  return rows;
}

void finish(CheckReport& r, const FamilySpec& fam, const std::vector<std::vector<char>>& rows) {
  r.prefix_length = fam.structures.size();
  r.tail_start = fam.tail_start;
  for (const auto& m : fam.structures) r.labels.push_back(m.label());
  for (std::size_t c = 0; c < r.candidates.size(); ++c) {
    auto& cand = r.candidates[c];
    cand.covers_tail = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i][c]) cand.sat.push_back(i);
      else if (i >= fam.tail_start) cand.covers_tail = false;
    }
    if (cand.covers_tail && !r.winner) r.winner = c;
  }
}

PrenexClass class_for(const Bound& A, const Formula& f) {
  switch (A.kind) {
    case Bound::Kind::Star: return is_first_order(f) ? PrenexClass::fo() : PrenexClass::sigma(1);
    case Bound::Kind::Nat: return pi_level(f) <= 1 ? PrenexClass::pi(1) : PrenexClass::pi(2);
    case Bound::Kind::Mono: return PrenexClass::sigma(2);
    case Bound::Kind::Pair: return PrenexClass::pi(3);
  }
  return PrenexClass::general();
}

}  // namespace

MonotoneFn parse_monotone(std::string_view text) { return parse_monotone_at(trim(text), 0); }

std::string to_string(const MonotoneFn& f) {
  std::string out = "mono:";
  for (std::size_t i = 0; i < f.breakpoints().size(); ++i) {
    if (i) out += ",";
    out += std::to_string(f.breakpoints()[i].first) + "->" + std::to_string(f.breakpoints()[i].second);
  }
  return out;
}

MonotoneFn pointwise_max(const std::vector<MonotoneFn>& fs) {
  if (fs.empty()) throw PreconditionError("pointwise max of no functions");
  std::vector<Nat> ts;
  for (const auto& f : fs)
    for (const auto& bp : f.breakpoints()) ts.push_back(bp.first);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::vector<std::pair<Nat, Nat>> bps;
  for (Nat t : ts) {
    Nat v = 0;
    for (const auto& f : fs) v = std::max(v, f(t));
    if (bps.empty() || bps.back().second != v) bps.emplace_back(t, v);
  }
  return MonotoneFn(std::move(bps));
}

MonotoneFn lookahead(const MonotoneFn& gap, Nat upto) {
  std::vector<std::pair<Nat, Nat>> bps;
  for (Nat m = 0; m <= upto; ++m) bps.emplace_back(m, m + gap(m));
  return MonotoneFn(std::move(bps));
}

Bound Bound::pair(Nat n, std::vector<MonotoneFn> fs) {
  if (fs.size() != 1 && fs.size() != n + 1)
    throw PreconditionError("pair bound needs one function or one per level 0.." + std::to_string(n));
  return {Kind::Pair, n, std::move(fs)};
}

const MonotoneFn& Bound::fn(Nat level) const {
  if (kind != Kind::Mono && kind != Kind::Pair) throw PreconditionError("bound has no function");
  if (fns.size() == 1) return fns[0];
  if (level >= fns.size()) throw PreconditionError("no function for level " + std::to_string(level));
  return fns[level];
}

Bound Bound::normalized() const {
  if (kind != Kind::Pair || fns.size() == 1) return *this;
  return Bound::pair(n, {pointwise_max(fns)});
}

Bound parse_bound(std::string_view text) {
  std::string_view s = trim(text);
  std::size_t base = static_cast<std::size_t>(s.data() - text.data());
  if (s == "*" || s == "star") return Bound::star();
  std::size_t pos = 0;
  if (s.substr(0, 4) == "nat:") {
    pos = 4;
    Nat n = read_nat(s, pos, base);
    if (pos != s.size()) throw ParseError("trailing input after bound", base + pos);
    return Bound::nat(n);
  }
  if (s.substr(0, 5) == "mono:") return Bound::mono(parse_monotone_at(s, base));
  if (s.substr(0, 5) == "pair:") {
    pos = 5;
    Nat n = read_nat(s, pos, base);
    std::vector<MonotoneFn> fs;
    while (pos < s.size()) {
      expect(s, pos, ";", base);
      std::size_t end = s.find(';', pos);
      if (end == std::string_view::npos) end = s.size();
      std::string_view part = s.substr(pos, end - pos);
      std::size_t lead = 0;
      while (lead < part.size() && part[lead] == ' ') ++lead;
      fs.push_back(parse_monotone_at(trim(part), base + pos + lead));
      pos = end;
    }
    if (fs.empty()) throw ParseError("pair bound needs a monotone function", base + pos);
    try {
      return Bound::pair(n, std::move(fs));
    } catch (const PreconditionError& e) {
      throw ParseError(e.what(), base);
    }
  }
  throw ParseError("expected *, nat:, mono: or pair:", base);
}

std::string to_string(const Bound& b) {
  switch (b.kind) {
    case Bound::Kind::Star: return "*";
    case Bound::Kind::Nat: return "nat:" + std::to_string(b.n);
    case Bound::Kind::Mono: return to_string(b.fns[0]);
    case Bound::Kind::Pair: {
      std::string out = "pair:" + std::to_string(b.n);
      for (const auto& f : b.fns) out += ";" + to_string(f);
      return out;
    }
  }
  return "?";
}

PrenexClass bound_class(const Bound& A, const Bound& E) {
  using K = Bound::Kind;
  if (A.kind == K::Star && E.kind == K::Star) return PrenexClass::fo();
  if (A.kind == K::Nat && E.kind == K::Star) return PrenexClass::pi(1);
  if (A.kind == K::Star && E.kind == K::Nat) return PrenexClass::sigma(1);
  if (A.kind == K::Nat && E.kind == K::Nat) return PrenexClass::pi(2);
  if (A.kind == K::Mono && E.kind == K::Nat) return PrenexClass::sigma(2);
  if (A.kind == K::Pair && E.kind == K::Nat) return PrenexClass::pi(3);
  throw PreconditionError("no class takes bounds (" + to_string(A) + ", " + to_string(E) + ")");
}

DecisivePair fragment_of(const Bound& A, const Bound& E, const Formula& f) {
  PrenexClass c = bound_class(A, E);
  bool member = c.kind == PrenexClass::Kind::FO   ? is_first_order(f)
                : c.kind == PrenexClass::Kind::Pi ? pi_level(f) <= c.level
                                                  : sigma_level(f) <= c.level;
  if (!member) throw PreconditionError(to_string(f) + " is not in " + to_string(c));
  if (c.kind == PrenexClass::Kind::FO) return fo_decisive_pair(f);
  const bool root_exists = c.kind == PrenexClass::Kind::Sigma;
  const int depth = c.level;
  const bool sigma = root_exists;
  auto domain = [&](const std::vector<Level>& path, bool exists) -> std::vector<Nat> {
    // block = alternations of polarity from the root; remember the first
    // index chosen in each block
    int block = 0;
    bool pol = root_exists;
    std::vector<std::optional<Nat>> first(4);
    for (const auto& l : path) {
      if (l.exists != pol) ++block, pol = l.exists;
      if (block < 4 && !first[block]) first[block] = l.index;
    }
    if (exists != pol) ++block;
    if (block >= depth) throw PreconditionError(to_string(f) + " alternates more often than " + to_string(c));
    auto at = [&](int b) { return first[b].value_or(0); };
    if (!sigma && depth <= 2) return upto(block == 0 ? A.n : E.n);
    if (sigma && depth == 1) return upto(E.n);
    if (sigma) return block == 0 ? upto(E.n) : upto(A.fn()(at(0)));
    if (block == 0) return upto(A.n);
    if (block == 1) return upto(E.n);
    return {A.fn(at(0))(at(1))};
  };
  return canonical_pair(f, domain);
}

std::vector<Bound> enumerate_exists_bounds(const PrenexClass& c, Nat cap) {
  switch (c.kind) {
    case PrenexClass::Kind::FO: return {Bound::star()};
    case PrenexClass::Kind::Pi:
      if (c.level == 1) return {Bound::star()};
      if (c.level > 3) break;
      [[fallthrough]];
    case PrenexClass::Kind::Sigma: {
      if (c.kind == PrenexClass::Kind::Sigma && c.level > 2) break;
      std::vector<Bound> out;
      for (Nat k = 0; k <= cap; ++k) out.push_back(Bound::nat(k));
      return out;
    }
    case PrenexClass::Kind::General: break;
  }
  throw PreconditionError("no enumerable exists bounds for " + to_string(c));
}

unsigned default_threads() {
  if (const char* s = std::getenv("BOUNDSEM_THREADS")) {
    int v = std::atoi(s);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

CheckReport check_family(const FamilySpec& fam, const Formula& f, const Bound& A, Nat capE, unsigned threads) {
  if (!free_vars(f).empty()) throw PreconditionError("check needs a sentence: " + to_string(f));
  CheckReport r;
  r.formula = to_string(f);
  r.forall_bound = to_string(A);
  r.witness_name = "E";
  std::vector<Bound> cands = enumerate_exists_bounds(class_for(A, f), capE);
  std::vector<BoundedPlan> plans;
  for (const auto& E : cands) {
    plans.emplace_back(f, fragment_of(A, E, f));
    r.candidates.push_back({"E=" + (E.kind == Bound::Kind::Star ? std::string("*") : std::to_string(E.n)), {}, false});
  }
  auto rows = per_structure<std::vector<char>>(fam, threads, r.seconds, [&](const Structure& m) {
    std::vector<char> row;
    for (const auto& p : plans) row.push_back(p.eval(m));
    return row;
  });
  finish(r, fam, rows);
  return r;
}

CheckReport check_metastable(const FamilySpec& fam, const Rational& eps, const MonotoneFn& F, Nat capM,
                             unsigned threads) {
  if (eps <= Rational(0) || eps > Rational(1)) throw PreconditionError("epsilon must lie in (0, 1]");
  CheckReport r;
  r.formula = "d(c_m, c_max(m,F(m))) < " + to_string(eps);
  r.forall_bound = "eps=" + to_string(eps) + ";F=" + to_string(F);
  r.witness_name = "m";
  for (Nat m = 0; m <= capM; ++m) r.candidates.push_back({"m=" + std::to_string(m), {}, false});
  auto rows = per_structure<std::vector<char>>(fam, threads, r.seconds, [&](const Structure& s) {
    const DistanceMatrix* d = s.distance_rule("D");
    const SequenceRule* c = s.sequence_rule("c");
    if (!d || !c) throw PreconditionError("not a sequence space");
    std::vector<char> row;
    for (Nat m = 0; m <= capM; ++m) row.push_back(d->at(c->at(m), c->at(std::max(m, F(m)))) < eps);
    return row;
  });
  finish(r, fam, rows);
  return r;
}

std::string render_machine(const CheckReport& r) {
  std::ostringstream os;
  os << "formula " << r.formula << "\n";
  os << "forall " << r.forall_bound << "\n";
  os << "prefix " << r.prefix_length << " tail-start " << r.tail_start << "\n";
  for (const auto& c : r.candidates) {
    os << c.label << " sat={";
    for (std::size_t i = 0; i < c.sat.size(); ++i) os << (i ? "," : "") << c.sat[i];
    os << "}\n";
  }
  os << "winner " << (r.winner ? r.candidates[*r.winner].label : std::string("none")) << "\n";
  return os.str();
}

std::string render_table(const CheckReport& r) {
  std::ostringstream os;
  os << "formula:    " << r.formula << "\n";
  os << "forall:     " << r.forall_bound << "\n";
  os << "structures: " << r.prefix_length << " (tail from index " << r.tail_start << ")\n\n";
  std::size_t width = 7;
  for (const auto& c : r.candidates) width = std::max(width, c.label.size());
  os << std::left;
  os.width(static_cast<std::streamsize>(width + 2));
  os << "witness";
  os << "#sat  tail  satisfied\n";
  for (const auto& c : r.candidates) {
    os.width(static_cast<std::streamsize>(width + 2));
    os << c.label;
    os.width(6);
    os << c.sat.size();
    os.width(6);
    os << (c.covers_tail ? "yes" : "no");
    os << ranges(c.sat) << "\n";
  }
  os << "\n";
  if (r.winner) {
    os << "verdict: holds on the tail with " << r.candidates[*r.winner].label << "\n";
  } else {
    os << "verdict: no witness up to " << (r.candidates.empty() ? std::string("-") : r.candidates.back().label)
       << " covers the tail\n";
  }
  double total = 0, worst = 0;
  std::size_t worst_i = 0;
  for (std::size_t i = 0; i < r.seconds.size(); ++i) {
    total += r.seconds[i];
    if (r.seconds[i] > worst) worst = r.seconds[i], worst_i = i;
  }
  os.precision(3);
  os << std::fixed << "time: " << total << " s over " << r.seconds.size() << " structures";
  if (!r.seconds.empty()) {
    const std::string& label = r.labels[worst_i];
    os << ", slowest " << (label.empty() ? "#" + std::to_string(worst_i) : label) << " " << worst << " s";
  }
  os << "\n";
  return os.str();
}

}  // namespace boundsem
