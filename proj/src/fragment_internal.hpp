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

// Unchecked building blocks shared by the fragment sources. Every function
// here assumes its arguments already passed check_shape.

#ifndef BOUNDSEM_SRC_FRAGMENT_INTERNAL_HPP
#define BOUNDSEM_SRC_FRAGMENT_INTERNAL_HPP

#include <optional>
#include <vector>

#include "boundsem/fragment.hpp"

namespace boundsem::detail {

bool leq_rec(const FragmentKind& kind, const Fragment& f, const Fragment& g, std::size_t cap);
bool subseteq_rec(const FragmentKind& kind, const Fragment& f, const Fragment& g, std::size_t cap);
std::vector<Fragment> below_rec(const FragmentKind& kind, const Fragment& f, std::size_t cap);
bool valid_rec(const FragmentKind& kind, const Fragment& f, std::size_t cap);
Fragment restrict_rec(const FragmentKind& kind, const Fragment& f, const Fragment& f2,
                      const Fragment& fs, std::size_t cap);

// An FnMap with the same domain and values, written out entry by entry.
Fragment materialize(const FragmentKind& kind, const Fragment& f, std::size_t cap);
std::optional<std::size_t> lookup_index(const FragmentKind& key_kind, const Fragment& f, const Fragment& key,
                                        std::size_t cap);
// Value at a key of an explicit FnMap, matching keys up to representation.
const Fragment* lookup(const FragmentKind& key_kind, const Fragment& f, const Fragment& key,
                       std::size_t cap);

void sort_unique(std::vector<Fragment>& v);

}  // namespace boundsem::detail

#endif  // BOUNDSEM_SRC_FRAGMENT_INTERNAL_HPP
