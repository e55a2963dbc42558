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

#ifndef BOUNDSEM_FAMILY_HPP
#define BOUNDSEM_FAMILY_HPP

#include <string>
#include <string_view>
#include <vector>

#include "boundsem/structure.hpp"

namespace boundsem {

// A finite prefix of a sequence of structures. Indices >= tail_start stand
// in for "cofinitely many".
struct FamilySpec {
  std::vector<Structure> structures;
  std::size_t tail_start = 0;

  void validate() const;
};

// Family file format, one statement per keyword (newlines are not
// significant, `#` starts a comment):
//
//   tail-start 20
//   structure two-points
//   universe 2
//   pred E/2 { (0,1) (1,0) }
//   pred U_0 { 0 }
//   fn S { 0->1 1->0 }
//   const a 1
//   const c_3 0
//   rule dist [0 1] [1 0]              (D_n from the matrix)
//   rule seq c prefix [1 0] tail periodic 2
//   cycle 3..12 coloring mod 3         (also: blocks <r>, single)
//   seqspace paper 0..39               (also: parity)
//
// Errors are ParseError with a 1-based line number, or Error naming the
// structure label.
FamilySpec parse_family(std::string_view text);
FamilySpec load_family(const std::string& path);

// Cycle Z_n with S(x) = x+1 mod n and U_i = parts[i].
Structure gen_cycle(Nat n, const std::vector<std::vector<Element>>& parts);

enum class SequenceKind { DelayedAlternation, Parity, Custom };

struct CustomSpace {
  DistanceMatrix distance;
  SequenceRule sequence;
};

// Sequence space over the metric signature: D_n from the distance matrix,
// c_k from the sequence rule. DelayedAlternation(i) is the two-point space with
// c_k = 1 when k < i or k is even and 0 otherwise; Parity has c_k = k mod 2.
Structure gen_sequence_space(Nat i, SequenceKind kind, const CustomSpace* custom = nullptr);

// gen_sequence_space for i = first..last.
FamilySpec sequence_family(SequenceKind kind, Nat first, Nat last, std::size_t tail_start);

}  // namespace boundsem

#endif  // BOUNDSEM_FAMILY_HPP
