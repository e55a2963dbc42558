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

// boundsem command-line tool.
//
// Exit status: 0 on success or a true verdict, 1 on a false verdict, 2 on
// any error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "boundsem/bounded.hpp"
#include "boundsem/bounds.hpp"
#include "boundsem/family.hpp"
#include "boundsem/parser.hpp"

namespace {

using namespace boundsem;

constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kError = 2;

const char* const kConvergence = "/\\{n in N} \\/{m in N} /\\{k in N} D_n(c_m, c_{max(m, k)})";
const char* const kRecurrence = "/\\{i in N} forall x. (U_i(x) -> \\/{s in N} U_i(S^{s+1}(x)))";

struct FormulaInput {
  std::string text;
  std::string file;
  std::string sig = "metric,cycle";

  void add(CLI::App* app) {
    app->add_option("formula", text, "Formula text");
    app->add_option("--formula-file", file, "Read the formula from a file");
    app->add_option("--sig", sig, "Signature: metric, cycle, pred:P/1, fn:f/1, const:a (comma separated)")
        ->capture_default_str();
  }

  Formula get() const {
    std::string src = text;
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw Error("cannot read " + file);
      std::stringstream ss;
      ss << in.rdbuf();
      src = ss.str();
    }
    if (src.empty()) throw Error("no formula given");
    return parse_formula(src, parse_signature(sig));
  }
};

struct PairInput {
  std::string A = "*";
  std::string E = "*";
  std::string pair;

  void add(CLI::App* app) {
    app->add_option("--A", A, "Forall-side bound (*, nat:N, mono:..., pair:N;mono:...)")->capture_default_str();
    app->add_option("--E", E, "Exists-side bound (*, nat:M)")->capture_default_str();
    app->add_option("--pair", pair, "Explicit decisive pair \"<a> <e>\" (overrides --A/--E)");
  }

  DecisivePair get(const Formula& f) const {
    if (!pair.empty()) return decode_pair(pair);
    return fragment_of(parse_bound(A), parse_bound(E), f);
  }
};

Env parse_env(const std::vector<std::string>& items) {
  Env env;
  for (const auto& it : items) {
    auto eq = it.find('=');
    if (eq == std::string::npos || eq == 0) throw Error("expected var=element, got '" + it + "'");
    env[it.substr(0, eq)] = static_cast<Element>(std::stoul(it.substr(eq + 1)));
  }
  return env;
}

void print_report(const CheckReport& r, const std::string& format) {
  std::cout << (format == "machine" ? render_machine(r) : render_table(r));
}

FamilySpec demo_family(const std::string& kind, Nat prefix, std::size_t tail) {
  SequenceKind k = kind == "paper" ? SequenceKind::DelayedAlternation : SequenceKind::Parity;
  return sequence_family(k, 0, prefix - 1, tail);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded semantics for infinitary sentences over finite structures"};
  app.require_subcommand(1);
  std::string format = "table";
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"table", "machine"}))->capture_default_str();

  // parse
  FormulaInput parse_in;
  auto* parse_cmd = app.add_subcommand("parse", "Echo the parsed formula and its prenex class");
  parse_in.add(parse_cmd);

  // eval
  FormulaInput eval_in;
  PairInput eval_pair;
  std::string eval_family;
  std::size_t eval_index = 0;
  std::vector<std::string> eval_env;
  auto* eval_cmd = app.add_subcommand("eval", "Bounded evaluation on one structure of a family file");
  eval_in.add(eval_cmd);
  eval_pair.add(eval_cmd);
  eval_cmd->add_option("--family", eval_family, "Family file")->required();
  eval_cmd->add_option("--index", eval_index, "Structure index in the family")->capture_default_str();
  eval_cmd->add_option("--env", eval_env, "Free variable assignments var=element");

  // compile
  FormulaInput compile_in;
  PairInput compile_pair;
  std::size_t max_disjuncts = std::size_t{1} << 16;
  auto* compile_cmd = app.add_subcommand("compile", "Emit the first-order formula equivalent to the bounded reading");
  compile_in.add(compile_cmd);
  compile_pair.add(compile_cmd);
  compile_cmd->add_option("--max-disjuncts", max_disjuncts, "Cap on emitted disjuncts")->capture_default_str();

  // check
  FormulaInput check_in;
  std::string check_family_path, check_A;
  Nat check_cap = 10;
  std::optional<std::size_t> check_tail;
  bool check_normalize = false;
  auto* check_cmd = app.add_subcommand("check", "Search the exists-side bound over a family of structures");
  check_in.add(check_cmd);
  check_cmd->add_option("--family", check_family_path, "Family file")->required();
  check_cmd->add_option("--A", check_A, "Forall-side bound")->required();
  check_cmd->add_option("--E-cap", check_cap, "Largest exists-side bound tried")->capture_default_str();
  check_cmd->add_option("--tail-start", check_tail, "Override the family's tail start");
  check_cmd->add_flag("--normalize-A", check_normalize, "Replace per-level functions by their pointwise max");

  // demo
  auto* demo_cmd = app.add_subcommand("demo", "Built-in demonstrations");
  demo_cmd->require_subcommand(1);
  std::string meta_family = "paper", meta_eps = "1/2", meta_F = "mono:0->1";
  bool meta_absolute = false;
  Nat meta_cap = 20, meta_prefix = 40;
  std::size_t meta_tail = 20;
  auto* meta_cmd = demo_cmd->add_subcommand("metastable", "Metastable convergence on sequence-space families");
  meta_cmd->add_option("--family", meta_family, "paper (delayed alternation) or parity")
      ->check(CLI::IsMember({"paper", "parity"}))
      ->capture_default_str();
  meta_cmd->add_option("--eps", meta_eps, "Rational epsilon in (0, 1]")->capture_default_str();
  meta_cmd->add_option("--F", meta_F, "Look-ahead gap G; the demo checks F(m) = m + G(m)")->capture_default_str();
  meta_cmd->add_flag("--F-absolute", meta_absolute, "Use --F as F itself rather than as a gap");
  meta_cmd->add_option("--M-cap", meta_cap, "Largest m tried")->capture_default_str();
  meta_cmd->add_option("--prefix", meta_prefix, "Number of structures")->check(CLI::PositiveNumber)->capture_default_str();
  meta_cmd->add_option("--tail-start", meta_tail, "First tail index")->capture_default_str();

  Nat rec_lo = 3, rec_hi = 12, rec_colors = 3, rec_cap = 8;
  std::size_t rec_tail = 0;
  auto* rec_cmd = demo_cmd->add_subcommand("recurrence", "Return times on coloured cycles");
  rec_cmd->add_option("--from", rec_lo, "Smallest cycle")->capture_default_str();
  rec_cmd->add_option("--to", rec_hi, "Largest cycle")->capture_default_str();
  rec_cmd->add_option("--colors", rec_colors, "Colour x by x mod colors")->check(CLI::PositiveNumber)->capture_default_str();
  rec_cmd->add_option("--E-cap", rec_cap, "Largest return-time bound tried")->capture_default_str();
  rec_cmd->add_option("--tail-start", rec_tail, "First tail index")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*parse_cmd) {
      Formula f = parse_in.get();
      std::cout << "formula " << to_string(f) << "\n";
      std::cout << "class " << to_string(classify(f)) << "\n";
      std::cout << "nodes " << f.size() << "\n";
      return kTrue;
    }
    if (*eval_cmd) {
      Formula f = eval_in.get();
      FamilySpec fam = load_family(eval_family);
      if (eval_index >= fam.structures.size())
        throw Error("index " + std::to_string(eval_index) + " outside family of " +
                    std::to_string(fam.structures.size()));
      bool v = eval_bounded(fam.structures[eval_index], f, eval_pair.get(f), parse_env(eval_env));
      std::cout << (v ? "true" : "false") << "\n";
      return v ? kTrue : kFalse;
    }
    if (*compile_cmd) {
      Formula f = compile_in.get();
      CompileOptions opts;
      opts.max_disjuncts = max_disjuncts;
      Formula g = compile_fo(f, compile_pair.get(f), opts);
      std::cout << to_string(g) << "\n";
      return kTrue;
    }
    if (*check_cmd) {
      Formula f = check_in.get();
      FamilySpec fam = load_family(check_family_path);
      if (check_tail) fam.tail_start = *check_tail;
      Bound A = parse_bound(check_A);
      if (check_normalize) A = A.normalized();
      CheckReport r = check_family(fam, f, A, check_cap);
      print_report(r, format);
      return r.winner ? kTrue : kFalse;
    }
    if (*meta_cmd) {
      if (meta_tail >= meta_prefix) throw Error("tail start must lie inside the prefix");
      Rational eps = parse_rational(meta_eps);
      MonotoneFn G = parse_monotone(meta_F);
      MonotoneFn F = meta_absolute ? G : lookahead(G, meta_cap);
      FamilySpec fam = demo_family(meta_family, meta_prefix, meta_tail);
      CheckReport direct = check_metastable(fam, eps, F, meta_cap);
      if (!meta_absolute) direct.forall_bound = "eps=" + to_string(eps) + ";F(m)=m+G(m),G=" + to_string(G);
      print_report(direct, format);
      // Cross-check through the Pi_3 convergence sentence when eps = 1/N.
      if (eps.numerator() == 1) {
        Nat N = static_cast<Nat>(eps.denominator());
        Formula f = parse_formula(kConvergence, metric_signature());
        CheckReport via = check_family(fam, f, Bound::pair(N, {F}), meta_cap);
        std::cout << "\n";
        print_report(via, format);
        bool agree = direct.winner.has_value() == via.winner.has_value();
        std::cout << "\nagreement " << (agree ? "yes" : "no") << "\n";
        if (!agree) return kError;
      }
      return direct.winner ? kTrue : kFalse;
    }
    if (*rec_cmd) {
      if (rec_lo == 0 || rec_hi < rec_lo) throw Error("need 1 <= --from <= --to");
      FamilySpec fam;
      for (Nat n = rec_lo; n <= rec_hi; ++n) {
        std::vector<std::vector<Element>> parts(rec_colors);
        for (Nat x = 0; x < n; ++x) parts[x % rec_colors].push_back(static_cast<Element>(x));
        fam.structures.push_back(gen_cycle(n, parts));
      }
      fam.tail_start = rec_tail;
      Formula f = parse_formula(kRecurrence, cycle_signature());
      CheckReport r = check_family(fam, f, Bound::nat(rec_colors - 1), rec_cap);
      print_report(r, format);
      return r.winner ? kTrue : kFalse;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
