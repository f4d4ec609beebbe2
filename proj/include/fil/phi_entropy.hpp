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

#include "fil/grid.hpp"
#include "fil/measure.hpp"

namespace fil {

/// The convex function paired with the p-Sobolev inequality:
///   p > 2:     -x^{2/p}
///   p = 2:     x log x
///   0 < p < 2: x^{2/p}
///   p = 0:     e^x
class PhiFamily {
 public:
  enum class Branch { exp, power_low, xlogx, neg_power };

  explicit PhiFamily(double p);

  double p() const { return p_; }
  Branch branch() const { return branch_; }

  /// Phi (order 0), Phi' (1) or Phi'' (2). x must be > 0 except on the exp
  /// branch.
  double operator()(double x, int order = 0) const;

  /// Whether x lies in the admissible domain of this branch.
  bool admissible(double x) const { return branch_ == Branch::exp || x > 0.0; }

 private:
  double p_;
  Branch branch_;
};

double phi(const PhiFamily& fam, double x, int order);

/// H_Phi(f) = mu(Phi(f)) - Phi(mu(f)).
double entropy(const Measure1D& mu, const GridFunction& f, double p);

struct VariationalEntropy {
  double value = 0.0;
  double c_star = 0.0;
};

/// inf over c of mu(Phi(f) - Phi(c) - Phi'(c)(f - c)) by golden-section search
/// on [min f, max f].
VariationalEntropy entropy_variational(const Measure1D& mu, const GridFunction& f, double p);

/// int Phi''(f) f'^2 dmu with f' from central differences.
double phi_dirichlet(const Measure1D& mu, const GridFunction& f, double p);

struct Distances {
  double tv = 0.0;         ///< mu(|f - 1|), the un-halved L1 distance
  double hellinger = 0.0;  ///< sqrt(2 (1 - mu(sqrt f)))
};

/// Distances between f mu and mu for a mu-probability density f.
/// Throws std::invalid_argument unless f >= 0 and |mu(f) - 1| <= 1e-8.
Distances distances(const Measure1D& mu, const GridFunction& f);

/// max(f, eps) pointwise, for indicator-like densities on the power and
/// entropy branches.
GridFunction epsilon_floor(const GridFunction& f, double eps = 1e-12);

}  // namespace fil
