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

// Reversible diffusion with invariant measure mu and reflecting walls.
//
// Finite-volume generator
//   (Lf)_i = [a_{i+1/2}(f_{i+1} - f_i) - a_{i-1/2}(f_i - f_{i-1})] / (w_i h^2)
// with w_i the trapezoid masses of mu and a_{i+1/2} = sqrt(rho_i rho_{i+1}),
// rho_i = h * density_i (geometric mean of neighbouring node masses). Hence
//   w_i L_{i,i+1} = w_{i+1} L_{i+1,i} = a_{i+1/2} / h^2        (detailed balance)
//   -sum_i g_i (Lf)_i w_i = sum_i a_{i+1/2} (df)(dg) / h^2      (summation by parts)
// and L1 = 0 exactly.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fil/grid.hpp"
#include "fil/measure.hpp"
#include "fil/tridiagonal.hpp"

namespace fil {

class Generator {
 public:
  explicit Generator(const Measure1D& mu);

  const GridSpec& grid() const { return mu_.grid(); }
  const Measure1D& measure() const { return mu_; }
  /// L_{i,i-1}; sub()[0] == 0.
  std::span<const double> sub() const { return sub_; }
  /// L_{i,i}; equals -(sub + super) exactly.
  std::span<const double> diag() const { return diag_; }
  /// L_{i,i+1}; super()[n-1] == 0.
  std::span<const double> super() const { return super_; }
  /// Edge conductances a_{i+1/2}, length n - 1.
  std::span<const double> conductance() const { return cond_; }

  /// out = L f in flux form.
  void apply(std::span<const double> f, std::span<double> out) const;
  std::vector<double> apply(const GridFunction& f) const;

  /// Discrete Dirichlet form sum_i a_{i+1/2}(f_{i+1}-f_i)(g_{i+1}-g_i)/h^2.
  double dirichlet_form(std::span<const double> f, std::span<const double> g) const;
  double dirichlet_form(std::span<const double> f) const { return dirichlet_form(f, f); }

  double max_abs_diag() const;

 private:
  Measure1D mu_;
  std::vector<double> cond_;
  std::vector<double> sub_, diag_, super_;
};

/// Crank-Nicolson stepper (I - dt/2 L) f_{k+1} = (I + dt/2 L) f_k with the
/// implicit matrix factorized once.
class Propagator {
 public:
  Propagator(const Generator& gen, double dt);

  double dt() const { return dt_; }
  void step(std::vector<double>& f) const;

  /// True when dt/2 * max|L_ii| <= 1, the condition under which the explicit
  /// half step has nonnegative entries and the step obeys the discrete
  /// maximum principle.
  bool max_principle_guaranteed() const { return max_principle_; }

 private:
  const Generator* gen_;
  double dt_;
  TridiagonalLU lu_;
  bool max_principle_;
};

/// The default time step.
inline constexpr double kDefaultDt = 1e-3;

/// P_t f0 by Crank-Nicolson steps of size dt, with a final partial step that
/// lands exactly on t.
GridFunction evolve(const Generator& gen, const GridFunction& f0, double t, double dt);

struct DecayCurve {
  double p = 0.0;
  std::vector<double> times;
  std::vector<double> entropy;
  std::vector<double> tv;         ///< NaN when f0 is not a mu-density
  std::vector<double> hellinger;  ///< NaN when f0 is not a mu-density
  std::optional<double> fitted_rate;
  double mu_f0 = 0.0;
  double mu_f0_pow = 0.0;  ///< mu(f0^{2/p}) for p > 0, NaN otherwise
  double max_mass_drift = 0.0;
  bool max_principle_guaranteed = false;
};

/// Evolves f0 along the sorted times t_grid (starting at t_grid[0] >= 0 from
/// f0 at t = 0) and records Phi-entropy, TV and Hellinger distances.
DecayCurve decay_curve(const Generator& gen, const GridFunction& f0, double p,
                       std::span<const double> t_grid, double dt = kDefaultDt);

/// Least-squares slope of -log(entropy) against t over points with
/// entropy > 1e-10; empty when fewer than two such points exist.
std::optional<double> fit_decay_rate(std::span<const double> times,
                                     std::span<const double> values);

struct DecayCheck {
  std::string quantity;  ///< "entropy", "tv" or "hellinger"
  double t = 0.0;
  double value = 0.0;
  double bound = 0.0;
  bool pass = true;
};

struct DecayVerification {
  double c_s = 0.0;
  double p = 0.0;
  double slack = 1.01;
  double abs_tol = 1e-12;
  std::vector<DecayCheck> checks;
  bool pass = true;
};

/// Checks, at every time point, with value <= slack * bound + abs_tol:
///   entropy(t)   <= e^{-2t/c_s} entropy(0)
///   tv(t)        <= 2p sqrt(1/(p-2)) e^{-t/c_s} (1 - mu[f0^{2/p}])^{1/2}   (p > 2)
///   hellinger(t) <= e^{-t/c_s} hellinger(0)                                (p = 4)
/// The tv and hellinger checks run only when the curve carries distances.
DecayVerification verify_decay_bounds(const DecayCurve& curve, double c_s, double p,
                                       double mu_f_2p);

/// Writes `t,entropy,tv,hellinger` rows with round-trip precision.
std::string decay_curve_csv(const DecayCurve& curve);

}  // namespace fil
