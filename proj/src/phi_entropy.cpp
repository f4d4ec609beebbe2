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

#include "fil/phi_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fil {

PhiFamily::PhiFamily(double p) : p_(p) {
  if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("PhiFamily requires p >= 0");
  if (p == 0.0) {
    branch_ = Branch::exp;
  } else if (p < 2.0) {
    branch_ = Branch::power_low;
  } else if (p == 2.0) {
    branch_ = Branch::xlogx;
  } else {
    branch_ = Branch::neg_power;
  }
}

double PhiFamily::operator()(double x, int order) const {
  if (order < 0 || order > 2) throw std::invalid_argument("phi: order must be 0, 1 or 2");
  if (branch_ == Branch::exp) return std::exp(x);
  if (!(x > 0.0)) throw std::domain_error("phi: argument must be positive on this branch");
  if (branch_ == Branch::xlogx) {
    switch (order) {
      case 0: return x * std::log(x);
      case 1: return std::log(x) + 1.0;
      default: return 1.0 / x;
    }
  }
  const double r = 2.0 / p_;
  const double sign = branch_ == Branch::neg_power ? -1.0 : 1.0;
  switch (order) {
    case 0: return sign * std::pow(x, r);
    case 1: return sign * r * std::pow(x, r - 1.0);
    default: return sign * r * (r - 1.0) * std::pow(x, r - 2.0);
  }
}

double phi(const PhiFamily& fam, double x, int order) { return fam(x, order); }

namespace {

void require_admissible(const PhiFamily& fam, const GridFunction& f) {
  for (double v : f.values()) {
    if (!std::isfinite(v)) throw std::domain_error("phi-entropy: non-finite function value");
    if (!fam.admissible(v)) {
      throw std::domain_error("phi-entropy: function must be strictly positive on this branch");
    }
  }
}

}  // namespace

double entropy(const Measure1D& mu, const GridFunction& f, double p) {
  require_same_grid(mu.grid(), f.grid(), "entropy");
  const PhiFamily fam(p);
  require_admissible(fam, f);
  const auto w = mu.weights();
  double mean = 0.0;
  double mean_phi = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    mean += w[i] * f[i];
    mean_phi += w[i] * fam(f[i]);
  }
  return mean_phi - fam(mean);
}

VariationalEntropy entropy_variational(const Measure1D& mu, const GridFunction& f, double p) {
  require_same_grid(mu.grid(), f.grid(), "entropy_variational");
  const PhiFamily fam(p);
  require_admissible(fam, f);
  const auto w = mu.weights();
  double mean = 0.0;
  double mean_phi = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    mean += w[i] * f[i];
    mean_phi += w[i] * fam(f[i]);
  }
  // mu(Phi(f) - Phi(c) - Phi'(c)(f - c)) = mu(Phi(f)) - Phi(c) - Phi'(c)(mu(f) - c)
  auto objective = [&](double c) { return mean_phi - fam(c) - fam(c, 1) * (mean - c); };

  double lo = f.min();
  double hi = f.max();
  if (hi - lo <= 0.0) return VariationalEntropy{objective(lo), lo};
  const double phi_ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - phi_ratio * (hi - lo);
  double d = lo + phi_ratio * (hi - lo);
  double fc = objective(c);
  double fd = objective(d);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - phi_ratio * (hi - lo);
      fc = objective(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + phi_ratio * (hi - lo);
      fd = objective(d);
    }
  }
  const double c_star = 0.5 * (lo + hi);
  return VariationalEntropy{objective(c_star), c_star};
}

double phi_dirichlet(const Measure1D& mu, const GridFunction& f, double p) {
  require_same_grid(mu.grid(), f.grid(), "phi_dirichlet");
  const PhiFamily fam(p);
  require_admissible(fam, f);
  const auto df = derivative(f.grid(), f.values());
  const auto w = mu.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * fam(f[i], 2) * df[i] * df[i];
  return s;
}

Distances distances(const Measure1D& mu, const GridFunction& f) {
  require_same_grid(mu.grid(), f.grid(), "distances");
  const auto w = mu.weights();
  double mass = 0.0;
  double tv = 0.0;
  double root = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(f[i] >= 0.0)) throw std::invalid_argument("distances: density must be nonnegative");
    mass += w[i] * f[i];
    tv += w[i] * std::abs(f[i] - 1.0);
    root += w[i] * std::sqrt(f[i]);
  }
  if (std::abs(mass - 1.0) > 1e-8) {
    throw std::invalid_argument("distances: f is not a mu-probability density");
  }
  return Distances{tv, std::sqrt(std::max(0.0, 2.0 * (1.0 - root)))};
}

GridFunction epsilon_floor(const GridFunction& f, double eps) {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) x = std::max(x, eps);
  return GridFunction(f.grid(), std::move(v));
}

}  // namespace fil
