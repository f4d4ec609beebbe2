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

#include "fil/perturbation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fil/hardy.hpp"

namespace fil {

PerturbedMeasure perturb(const Measure1D& mu, const GridFunction& u) {
  require_same_grid(mu.grid(), u.grid(), "perturb");
  for (double v : u.values()) {
    if (!std::isfinite(v)) throw InputError("perturbation u must be finite on the grid");
  }
  const std::size_t n = u.size();
  std::vector<double> ld(mu.log_density().begin(), mu.log_density().end());
  for (std::size_t i = 0; i < n; ++i) ld[i] -= u[i];

  constexpr std::size_t q = Measure1D::kGaussPoints;
  std::vector<double> cell(mu.cell_log_density().begin(), mu.cell_log_density().end());
  for (std::size_t c = 0; c + 1 < n; ++c) {
    for (std::size_t k = 0; k < q; ++k) {
      const double t = Measure1D::kGaussNodes[k];
      cell[c * q + k] -= (1.0 - t) * u[c] + t * u[c + 1];
    }
  }
  const double osc = u.max() - u.min();
  std::string note = mu.support_note();
  note += fmt::format("; perturbed by e^(-u), Osc(u) = {:.9g}", osc);
  return {Measure1D::from_log_density(mu.grid(), std::move(ld), std::move(note), std::move(cell)),
          osc};
}

PerturbationReport perturbation_check(const Measure1D& mu, const GridFunction& u, double p,
                                      const OptimizerOptions& options) {
  if (!(p >= 0.0)) throw std::invalid_argument("perturbation_check: p must be >= 0");
  const PerturbedMeasure pm = perturb(mu, u);
  PerturbationReport rep;
  rep.p = p;
  rep.osc = pm.osc;
  rep.factor = std::exp(pm.osc);

  rep.inconclusive = true;
  if (p > 2.0) {
    const SobolevSandwich s = sobolev_sandwich(mu, NuDensity::same_as(mu), p, options.exec);
    if (!s.diverged) {
      rep.base_upper = s.cs_upper;
      rep.inconclusive = false;
    }
  }
  if (rep.inconclusive) rep.base_upper = maximize_constant(mu, p, options).value;

  rep.perturbed_emp = maximize_constant(pm.measure, p, options).value;
  rep.ratio = rep.perturbed_emp / rep.base_upper;
  rep.pass = rep.perturbed_emp <= rep.factor * rep.base_upper * (1.0 + rep.tolerance);
  return rep;
}

}  // namespace fil
