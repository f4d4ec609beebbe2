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

#include "fil/grid.hpp"

#include <algorithm>
#include <cmath>

namespace fil {

GridSpec GridSpec::make(double x_min, double x_max, std::size_t n) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw InputError("grid endpoints must be finite");
  }
  if (!(x_min < x_max)) {
    throw InputError("grid requires x_min < x_max");
  }
  if (n < 11) {
    throw InputError("grid requires at least 11 nodes");
  }
  return GridSpec{x_min, x_max, n};
}

std::vector<double> GridSpec::nodes() const {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = node(i);
  return x;
}

GridFunction::GridFunction(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.n) {
    throw std::invalid_argument("grid function length does not match grid");
  }
}

GridFunction GridFunction::constant(const GridSpec& grid, double c) {
  return GridFunction(grid, std::vector<double>(grid.n, c));
}

GridFunction GridFunction::sample(const GridSpec& grid,
                                  const std::function<double(double)>& fn) {
  std::vector<double> v(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) v[i] = fn(grid.node(i));
  return GridFunction(grid, std::move(v));
}

double GridFunction::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

double GridFunction::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
  }
}

std::vector<double> derivative(const GridSpec& grid, std::span<const double> f) {
  const std::size_t n = f.size();
  const double h = grid.delta();
  std::vector<double> d(n);
  d[0] = (f[1] - f[0]) / h;
  d[n - 1] = (f[n - 1] - f[n - 2]) / h;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  return d;
}

}  // namespace fil
