/*
 * Copyright 2026 The fil Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Arithmetic expressions in one variable x for initial data and potentials:
//   numbers, x, pi, + - * / ^ (right-associative), unary minus, parentheses,
//   sin(.), cos(.), exp(.)
// Nothing else is accepted, so a run is determined by its configuration.

#include <memory>
#include <string>

#include "fil/grid.hpp"

namespace fil {

class Expression {
 public:
  /// Throws InputError with the offending position on a syntax error.
  static Expression parse(const std::string& text);

  double operator()(double x) const;
  const std::string& text() const { return text_; }

  /// Samples on the grid; throws InputError if any value is non-finite.
  GridFunction sample(const GridSpec& grid) const;

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace fil
