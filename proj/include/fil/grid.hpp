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

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fil {

/// Raised for malformed user input (bad descriptors, tables, expressions).
/// The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform grid on [x_min, x_max] with n nodes.
struct GridSpec {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n = 11;

  /// Validating factory: x_min < x_max, n >= 11, both endpoints finite.
  static GridSpec make(double x_min, double x_max, std::size_t n);

  double delta() const { return (x_max - x_min) / static_cast<double>(n - 1); }

  /// Node i; the last node is x_max exactly.
  double node(std::size_t i) const {
    return i + 1 == n ? x_max : x_min + static_cast<double>(i) * delta();
  }

  std::vector<double> nodes() const;

  bool operator==(const GridSpec&) const = default;
};

/// Real values sampled at the nodes of a grid.
class GridFunction {
 public:
  GridFunction(GridSpec grid, std::vector<double> values);

  static GridFunction constant(const GridSpec& grid, double c);
  static GridFunction sample(const GridSpec& grid,
                             const std::function<double(double)>& fn);

  const GridSpec& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  double min() const;
  double max() const;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// Throws std::invalid_argument unless both grids are identical.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

/// Derivative by central differences in the interior and first-order
/// one-sided differences at the two endpoints.
std::vector<double> derivative(const GridSpec& grid, std::span<const double> f);

}  // namespace fil
