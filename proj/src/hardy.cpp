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

#include "fil/hardy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fil {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kGoldenIterations = 40;

double budget_for(HardyVariant variant, double p) {
  return variant == HardyVariant::lower_b ? 0.5 : std::pow(p - 1.0, p / (p - 2.0));
}

// Piecewise-linear profile along the distance s = |x - m| from the median.
struct SideProfile {
  std::vector<double> s;
  std::vector<double> tail;
  std::vector<double> resistance;

  double interp(const std::vector<double>& v, double at) const {
    const auto it = std::upper_bound(s.begin(), s.end(), at);
    std::size_t j = static_cast<std::size_t>(it - s.begin());
    j = std::clamp<std::size_t>(j, 1, s.size() - 1);
    const double t = (at - s[j - 1]) / (s[j] - s[j - 1]);
    return v[j - 1] + std::clamp(t, 0.0, 1.0) * (v[j] - v[j - 1]);
  }
};

// Tails of the truncated measure from the Gauss cell masses, so that T vanishes
// at the end of the support. Trapezoid node masses give the last node a tail
// of h/2 times its density, which near a vanishing density is several times
// the true mass beyond it and inflates the product with the resistance.
void cell_tails(const Measure1D& mu, std::vector<double>& left, std::vector<double>& right) {
  const auto cells = mu.cell_totals();
  const std::size_t n = cells.size() + 1;
  left.assign(n, 0.0);
  right.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) left[i] = left[i - 1] + cells[i - 1];
  for (std::size_t i = n - 1; i-- > 0;) right[i] = right[i + 1] + cells[i];
}

double interp_nodes(const GridSpec& g, const std::vector<double>& v, double x) {
  const double h = g.delta();
  std::size_t k = static_cast<std::size_t>(std::floor((x - g.x_min) / h));
  k = std::min(k, g.n - 2);
  const double t = std::clamp((x - g.node(k)) / h, 0.0, 1.0);
  return v[k] + t * (v[k + 1] - v[k]);
}

// int 1/n over a cell of width h with log n linear between the end values:
// exact for exponential behaviour and far closer than the trapezoid rule
// where n vanishes like a power at the end of the support.
double inv_density_cell(double n0, double n1, double h) {
  const double b = std::log(n1 / n0);
  if (std::abs(b) < 1e-8) return h / std::sqrt(n0 * n1);
  return h / n0 * (-std::expm1(-b)) / b;
}

}  // namespace

std::vector<double> inv_density_cumulative(const NuDensity& nu, double m) {
  const auto& g = nu.grid;
  if (!(m >= g.x_min && m <= g.x_max)) {
    throw std::invalid_argument("inv_density_cumulative: m outside the grid range");
  }
  const std::size_t n = g.n;
  const double h = g.delta();
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    c[i] = c[i - 1] + inv_density_cell(nu.values[i - 1], nu.values[i], h);
  }
  std::size_t k = static_cast<std::size_t>(std::floor((m - g.x_min) / h));
  k = std::min(k, n - 2);
  const double frac = std::clamp((m - g.node(k)) / h, 0.0, 1.0);
  // n at m on the same log-linear model, then the partial cell [x_k, m].
  const double n_m = nu.values[k] * std::pow(nu.values[k + 1] / nu.values[k], frac);
  const double c_m = c[k] + inv_density_cell(nu.values[k], n_m, frac * h);
  for (double& v : c) v -= c_m;
  return c;
}

HardyValue hardy_bound(const Measure1D& mu, const NuDensity& nu, double p, HardySide side,
                       HardyVariant variant, Exec exec) {
  if (!(p > 2.0)) throw std::invalid_argument("hardy_bound requires p > 2");
  require_same_grid(mu.grid(), nu.grid, "hardy_bound");

  const auto& g = mu.grid();
  const double m = median(mu);
  const auto table = inv_density_cumulative(nu, m);
  const double K = budget_for(variant, p);
  std::vector<double> left, right;
  cell_tails(mu, left, right);

  SideProfile prof;
  prof.s.push_back(0.0);
  prof.resistance.push_back(0.0);
  std::vector<double> xs{m};
  if (side == HardySide::plus) {
    prof.tail.push_back(interp_nodes(g, right, m));
    for (std::size_t i = 0; i < g.n; ++i) {
      const double x = g.node(i);
      if (x <= m) continue;
      xs.push_back(x);
      prof.s.push_back(x - m);
      prof.tail.push_back(right[i]);
      prof.resistance.push_back(table[i]);
    }
  } else {
    prof.tail.push_back(interp_nodes(g, left, m));
    for (std::size_t i = g.n; i-- > 0;) {
      const double x = g.node(i);
      if (x >= m) continue;
      xs.push_back(x);
      prof.s.push_back(m - x);
      prof.tail.push_back(left[i]);
      prof.resistance.push_back(-table[i]);
    }
  }
  if (prof.s.size() < 2) return HardyValue{0.0, m, false};

  std::vector<double> values(prof.s.size());
  hardy_profile(prof.tail, prof.resistance, K, p, values, exec);

  const auto best_it = std::max_element(values.begin(), values.end());
  const std::size_t best = static_cast<std::size_t>(best_it - values.begin());
  double best_value = *best_it;
  double best_s = prof.s[best];

  if (best_value <= kDivergenceCap) {
    auto objective = [&](double s) {
      return hardy_bracket(prof.interp(prof.tail, s), K, p) * prof.interp(prof.resistance, s);
    };
    // Linear interpolation is meaningless across the cell where the tail hits
    // zero, so the bracket stops at the last node with positive tail.
    std::size_t last = prof.s.size() - 1;
    while (last > 0 && !(prof.tail[last] > 0.0)) --last;
    double lo = prof.s[best == 0 ? 0 : best - 1];
    double hi = prof.s[std::min(best + 1, last)];
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - phi * (hi - lo);
    double d = lo + phi * (hi - lo);
    double fc = objective(c);
    double fd = objective(d);
    for (int it = 0; it < kGoldenIterations; ++it) {
      if (fc > fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - phi * (hi - lo);
        fc = objective(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + phi * (hi - lo);
        fd = objective(d);
      }
    }
    const double s_ref = fc > fd ? c : d;
    const double v_ref = std::max(fc, fd);
    if (v_ref > best_value) {
      best_value = v_ref;
      best_s = s_ref;
    }
  }

  const double argmax = side == HardySide::plus ? m + best_s : m - best_s;
  if (best_value > kDivergenceCap) return HardyValue{kInf, argmax, true};
  return HardyValue{best_value, argmax, false};
}

SobolevSandwich sobolev_sandwich(const Measure1D& mu, const NuDensity& nu, double p,
                                 Exec exec) {
  if (!(p > 2.0)) throw std::invalid_argument("sobolev_sandwich requires p > 2");
  require_same_grid(mu.grid(), nu.grid, "sobolev_sandwich");

  constexpr std::array<std::pair<HardySide, HardyVariant>, 4> jobs{{
      {HardySide::minus, HardyVariant::lower_b},
      {HardySide::plus, HardyVariant::lower_b},
      {HardySide::minus, HardyVariant::upper_B},
      {HardySide::plus, HardyVariant::upper_B},
  }};
  std::array<HardyValue, 4> out{};
  // Inner scans run serially; the four sides are the parallel unit here.
  for_each_index(jobs.size(), exec, [&](std::size_t j) {
    out[j] = hardy_bound(mu, nu, p, jobs[j].first, jobs[j].second, Exec::serial);
  });

  SobolevSandwich s;
  s.p = p;
  s.b_minus = out[0];
  s.b_plus = out[1];
  s.B_minus = out[2];
  s.B_plus = out[3];

  const HardyValue& lower = s.b_plus.value >= s.b_minus.value ? s.b_plus : s.b_minus;
  const HardyValue& upper = s.B_plus.value >= s.B_minus.value ? s.B_plus : s.B_minus;
  s.c_raw_lower = lower.value;
  s.c_raw_upper = 4.0 * upper.value;
  s.argmax_lower = lower.argmax;
  s.argmax_upper = upper.argmax;
  s.diverged = std::any_of(out.begin(), out.end(), [](const HardyValue& v) { return v.diverged; });
  if (s.c_raw_upper > kDivergenceCap) s.diverged = true;
  if (s.diverged) s.c_raw_upper = kInf;
  if (s.c_raw_lower > kDivergenceCap) s.c_raw_lower = kInf;
  s.cs_lower = s.c_raw_lower / (p - 2.0);
  s.cs_upper = s.c_raw_upper / (p - 2.0);
  return s;
}

double lemma45_closed_form(std::span<const double> atom_masses, std::span<const std::size_t> subset,
                           double a, double K) {
  if (!(a > 1.0)) throw std::invalid_argument("lemma45_closed_form requires a > 1");
  if (subset.empty()) throw std::invalid_argument("lemma45_closed_form requires a nonempty subset");
  double total = 0.0;
  for (double m : atom_masses) {
    if (!(m > 0.0)) throw std::invalid_argument("lemma45_closed_form requires positive masses");
    total += m;
  }
  if (!(K > total)) throw std::invalid_argument("lemma45_closed_form requires K > mu(X)");
  double mass_a = 0.0;
  for (std::size_t idx : subset) {
    if (idx >= atom_masses.size()) throw std::invalid_argument("lemma45_closed_form: bad index");
    mass_a += atom_masses[idx];
  }
  return mass_a * std::expm1((a - 1.0) / a * std::log1p((K - total) / mass_a));
}

double defective_to_tight(double A, double B, double c_p, double p) {
  if (A < 0.0 || B < 0.0) throw std::invalid_argument("defective_to_tight: A, B must be >= 0");
  if (!(c_p > 0.0)) throw std::invalid_argument("defective_to_tight: c_p must be > 0");
  if (!(p > 2.0)) throw std::invalid_argument("defective_to_tight requires p > 2");
  return (p - 1.0) * A + c_p * std::max((p - 1.0) * B - 1.0, 0.0);
}

}  // namespace fil
