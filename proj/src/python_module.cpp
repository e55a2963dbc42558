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

// Python bindings: formulas, structures and families, decisive pairs, bounded
// evaluation, compilation and the family checkers. Formulas, structures and
// pairs are opaque handles; bounds and monotone functions are passed in their
// text syntax.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "boundsem/bounded.hpp"
#include "boundsem/bounds.hpp"
#include "boundsem/family.hpp"
#include "boundsem/parser.hpp"

namespace py = pybind11;
using namespace boundsem;

namespace {

Formula parse(const std::string& text, const std::string& sig) { return parse_formula(text, parse_signature(sig)); }

py::dict report_dict(const CheckReport& r) {
  py::list cands;
  for (const auto& c : r.candidates) {
    py::dict d;
    d["label"] = c.label;
    d["sat"] = c.sat;
    d["covers_tail"] = c.covers_tail;
    cands.append(d);
  }
  py::dict out;
  out["formula"] = r.formula;
  out["forall_bound"] = r.forall_bound;
  out["candidates"] = cands;
  out["winner"] = r.winner ? py::object(py::str(r.candidates[*r.winner].label)) : py::none();
  out["prefix_length"] = r.prefix_length;
  out["tail_start"] = r.tail_start;
  out["seconds"] = r.seconds;
  out["machine"] = render_machine(r);
  out["table"] = render_table(r);
  return out;
}

}  // namespace

PYBIND11_MODULE(boundsem, m) {
  m.doc() = "Bounded semantics for countable-conjunction sentences over finite structures";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<ShapeMismatch>(m, "ShapeMismatch", error.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", error.ptr());
  py::register_exception<BoundTooLarge>(m, "BoundTooLarge", error.ptr());

  py::class_<Formula>(m, "Formula")
      .def("__str__", [](const Formula& f) { return to_string(f); })
      .def("__repr__", [](const Formula& f) { return "<Formula " + to_string(f) + ">"; })
      .def("__eq__", [](const Formula& a, const Formula& b) { return a == b; })
      .def_property_readonly("prenex_class", [](const Formula& f) { return to_string(classify(f)); })
      .def_property_readonly("is_first_order", [](const Formula& f) { return is_first_order(f); })
      .def_property_readonly("free_vars", [](const Formula& f) { return free_vars(f); })
      .def_property_readonly("size", &Formula::size);

  m.def("parse_formula", &parse, py::arg("text"), py::arg("signature") = "metric,cycle",
        "Parse a formula; `signature` uses the CLI's --sig syntax.");
  m.def("classify", [](const std::string& text, const std::string& sig) { return to_string(classify(parse(text, sig))); },
        py::arg("text"), py::arg("signature") = "metric,cycle");

  py::class_<Structure>(m, "Structure")
      .def_property_readonly("label", &Structure::label)
      .def_property_readonly("size", &Structure::size)
      .def("__repr__", [](const Structure& s) { return "<Structure " + s.label() + " size " + std::to_string(s.size()) + ">"; });

  py::class_<FamilySpec>(m, "Family")
      .def_readonly("structures", &FamilySpec::structures)
      .def_readwrite("tail_start", &FamilySpec::tail_start)
      .def("__len__", [](const FamilySpec& f) { return f.structures.size(); });

  m.def("parse_family", [](const std::string& text) { return parse_family(text); }, py::arg("text"));
  m.def("load_family", &load_family, py::arg("path"));
  m.def(
      "sequence_family",
      [](const std::string& kind, Nat first, Nat last, std::size_t tail_start) {
        if (kind != "paper" && kind != "parity") throw PreconditionError("kind must be 'paper' or 'parity'");
        return sequence_family(kind == "paper" ? SequenceKind::DelayedAlternation : SequenceKind::Parity, first, last,
                               tail_start);
      },
      py::arg("kind"), py::arg("first"), py::arg("last"), py::arg("tail_start"));

  py::class_<DecisivePair>(m, "DecisivePair")
      .def(py::init([](const std::string& text) { return decode_pair(text); }), py::arg("text"))
      .def_property_readonly("a", [](const DecisivePair& p) { return encode(p.a); })
      .def_property_readonly("e", [](const DecisivePair& p) { return encode(p.e); })
      .def("__str__", [](const DecisivePair& p) { return encode(p); })
      .def("__eq__", [](const DecisivePair& a, const DecisivePair& b) { return a == b; });

  m.def(
      "fragment_of",
      [](const std::string& A, const std::string& E, const Formula& f) {
        return fragment_of(parse_bound(A), parse_bound(E), f);
      },
      py::arg("A"), py::arg("E"), py::arg("formula"));
  m.def("fo_decisive_pair", [](const Formula& f) { return fo_decisive_pair(f); }, py::arg("formula"));
  m.def("is_decisive", [](const Formula& f, const DecisivePair& p) { return is_decisive(f, p); }, py::arg("formula"),
        py::arg("pair"));
  m.def(
      "eval_bounded",
      [](const Structure& s, const Formula& f, const DecisivePair& p, const Env& env) {
        return eval_bounded(s, f, p, env);
      },
      py::arg("structure"), py::arg("formula"), py::arg("pair"), py::arg("env") = Env{});
  m.def(
      "eval_fo", [](const Structure& s, const Formula& f, const Env& env) { return eval_fo(s, f, env); },
      py::arg("structure"), py::arg("formula"), py::arg("env") = Env{});
  m.def("compile_fo", [](const Formula& f, const DecisivePair& p) { return compile_fo(f, p); }, py::arg("formula"),
        py::arg("pair"));

  m.def("bound_class", [](const std::string& A, const std::string& E) {
    return to_string(bound_class(parse_bound(A), parse_bound(E)));
  });
  m.def("normalize_bound", [](const std::string& A) { return to_string(parse_bound(A).normalized()); });
  m.def(
      "check_family",
      [](const FamilySpec& fam, const Formula& f, const std::string& A, Nat cap, unsigned threads) {
        Bound bound = parse_bound(A);
        CheckReport r;
        {
          py::gil_scoped_release release;
          r = check_family(fam, f, bound, cap, threads);
        }
        return report_dict(r);
      },
      py::arg("family"), py::arg("formula"), py::arg("A"), py::arg("E_cap"), py::arg("threads") = 0);
  m.def(
      "check_metastable",
      [](const FamilySpec& fam, const std::string& eps, const std::string& F, Nat cap, unsigned threads) {
        Rational e = parse_rational(eps);
        MonotoneFn fn = parse_monotone(F);
        CheckReport r;
        {
          py::gil_scoped_release release;
          r = check_metastable(fam, e, fn, cap, threads);
        }
        return report_dict(r);
      },
      py::arg("family"), py::arg("eps"), py::arg("F"), py::arg("M_cap"), py::arg("threads") = 0);
}
