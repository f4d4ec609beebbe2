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

// Bounded perturbations d mu_u = Z^{-1} e^{-u} d mu and the stability of the
// Sobolev constant under them: C_S(p; mu_u) <= e^{Osc(u)} C_S(p; mu).

#include "fil/grid.hpp"
#include "fil/measure.hpp"
#include "fil/variational.hpp"

namespace fil {

struct PerturbedMeasure {
  Measure1D measure;
  double osc = 0.0;  ///< max u - min u over the grid
};

/// Subtracts u from the log-density (linearly interpolated between nodes for
/// the Gauss-point representation) and renormalizes. Throws InputError on
/// non-finite u.
PerturbedMeasure perturb(const Measure1D& mu, const GridFunction& u);

struct PerturbationReport {
  double p = 0.0;
  double osc = 0.0;
  double factor = 0.0;         ///< e^osc
  double base_upper = 0.0;     ///< cs_upper of mu, or its empirical value when inconclusive
  double perturbed_emp = 0.0;  ///< lower estimate for the perturbed measure
  double ratio = 0.0;          ///< perturbed_emp / base_upper, for inspection only
  double tolerance = 1e-2;
  bool inconclusive = false;   ///< no certified upper bound was available for mu
  bool pass = true;            ///< perturbed_emp <= factor * base_upper * (1 + tolerance)
};

/// Compares the perturbed empirical constant with e^osc times the certified
/// upper bound of mu. The upper bound comes from the Hardy sandwich for p > 2;
/// for p <= 2, or when the sandwich diverges, the base empirical value stands
/// in and the report is marked inconclusive.
PerturbationReport perturbation_check(const Measure1D& mu, const GridFunction& u, double p,
                                      const OptimizerOptions& options = {});

}  // namespace fil
