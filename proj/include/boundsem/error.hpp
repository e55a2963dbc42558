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

#ifndef BOUNDSEM_ERROR_HPP
#define BOUNDSEM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace boundsem {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed formula, fragment or family text. `position` is a byte offset
// (formulas, fragments) or a 1-based line number (family files).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// A fragment whose constructor tags do not fit the formula node.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

// Violated operation precondition (ordering hypotheses, incoherent input,
// non-decisive pair, class mismatch).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An enumeration or compilation would exceed its configured cap.
class BoundTooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace boundsem

#endif  // BOUNDSEM_ERROR_HPP
