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

#include <span>
#include <vector>

namespace fil {

/// LU factorization of a tridiagonal matrix without pivoting (Thomas
/// algorithm), reusable across right-hand sides. Row i reads
///   lower[i] * x[i-1] + diag[i] * x[i] + upper[i] * x[i+1];
/// lower[0] and upper[n-1] are ignored.
class TridiagonalLU {
 public:
  TridiagonalLU(std::span<const double> lower, std::span<const double> diag,
                std::span<const double> upper);

  /// Solves in place. Throws std::runtime_error on a zero pivot (at
  /// factorization time).
  void solve(std::span<double> rhs) const;

  std::size_t size() const { return pivot_.size(); }

 private:
  std::vector<double> lower_;
  std::vector<double> pivot_;
  std::vector<double> upper_ratio_;
};

}  // namespace fil
