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

#ifndef BOUNDSEM_PARSER_HPP
#define BOUNDSEM_PARSER_HPP

#include <string_view>

#include "boundsem/logic.hpp"

namespace boundsem {

struct ParseOptions {
  // Accept unbound index metavariables (template bodies); sentences reject them.
  bool allow_free_index_vars = false;
};

// Grammar (whitespace-insensitive):
//   formula := implication
//   implication := disjunction ["->" implication]
//   disjunction := conjunction ("\/" conjunction)*
//   conjunction := unary ("/\" unary)*
//   unary := "~" unary | "forall" VAR "." formula | "exists" VAR "." formula
//          | "/\{" IVAR "in" ("N"|"2") "}" formula | "\/{" IVAR "in" ("N"|"2") "}" formula
//          | "/\[" formula "]" | "(" formula ")" | "true" | "false" | atom
//   atom := PRED ["_" idx] "(" [term ("," term)*] ")"
//   term := VAR | CONST ["_" idx] | FN ["_" idx] ["^" idx] "(" term ("," term)* ")"
//   idx  := NAT | IVAR | "{" iexpr "}"
//   iexpr := sum of products of NAT | IVAR | "max(" iexpr "," iexpr ")" | "(" iexpr ")"
// Sugar is removed while parsing: exists, \/, -> and true/false become
// Not/Forall/And nodes. Throws ParseError with the byte offset.
Formula parse_formula(std::string_view text, const Signature& sig, const ParseOptions& options = {});

IndexExpr parse_index_expr(std::string_view text);

// Comma-separated declarations: `metric`, `cycle`, `pred:P/1`, `fn:f/2`,
// `const:a`; a `_n` suffix on the name makes the symbol indexed
// (`pred:Q_n/1`, `const:c_n`).
Signature parse_signature(std::string_view text);

}  // namespace boundsem

#endif  // BOUNDSEM_PARSER_HPP
