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

#include "fil/tridiagonal.hpp"

#include <cmath>
#include <stdexcept>

namespace fil {

TridiagonalLU::TridiagonalLU(std::span<const double> lower, std::span<const double> diag,
                             std::span<const double> upper)
    : lower_(lower.begin(), lower.end()), pivot_(diag.size()), upper_ratio_(diag.size(), 0.0) {
  const std::size_t n = diag.size();
  if (n == 0 || lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("TridiagonalLU: inconsistent band lengths");
  }
  double piv = diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) piv = diag[i] - lower_[i] * upper_ratio_[i - 1];
    if (piv == 0.0 || !std::isfinite(piv)) {
      throw std::runtime_error("tridiagonal solver breakdown: zero pivot");
    }
    pivot_[i] = piv;
    if (i + 1 < n) upper_ratio_[i] = upper[i] / piv;
  }
}

void TridiagonalLU::solve(std::span<double> x) const {
  const std::size_t n = pivot_.size();
  if (x.size() != n) throw std::invalid_argument("TridiagonalLU::solve: size mismatch");
  x[0] /= pivot_[0];
  for (std::size_t i = 1; i < n; ++i) x[i] = (x[i] - lower_[i] * x[i - 1]) / pivot_[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= upper_ratio_[i] * x[i + 1];
}

}  // namespace fil
