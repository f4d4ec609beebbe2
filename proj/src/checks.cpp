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

#include "fil/checks.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "fil/hardy.hpp"
#include "fil/rng.hpp"

namespace fil {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double total(std::span<const double> m) { return std::accumulate(m.begin(), m.end(), 0.0); }

double power_sum(std::span<const double> m, std::span<const double> s, double q) {
  double v = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) v += m[j] * std::pow(s[j], q);
  return v;
}

void validate_program(std::span<const double> m, std::span<const double> c,
                      std::span<const double> lower, double q, double K) {
  if (m.empty() || c.size() != m.size() || lower.size() != m.size()) {
    throw std::invalid_argument("linear program: size mismatch");
  }
  if (!(q > 1.0)) throw std::invalid_argument("linear program: q must exceed 1");
  double base = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (!(m[j] > 0.0)) throw std::invalid_argument("linear program: masses must be positive");
    if (!(lower[j] >= -1.0)) throw std::invalid_argument("linear program: lower bounds must be >= -1");
    base += m[j] * std::pow(lower[j] + 1.0, q);
  }
  if (base > K * (1.0 + 1e-14)) throw std::invalid_argument("linear program: empty constraint set");
}

// Root of s + lambda q s^{q-1} = t on [0, t] for t > 0 (safeguarded Newton).
double prox_root(double t, double lambda, double q) {
  double lo = 0.0, hi = t, s = t;
  for (int it = 0; it < 100; ++it) {
    const double val = s + lambda * q * std::pow(s, q - 1.0) - t;
    if (val > 0.0) hi = s; else lo = s;
    const double der = 1.0 + lambda * q * (q - 1.0) * std::pow(s, q - 2.0);
    double next = s - val / der;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 1e-15 * t) return next;
    s = next;
  }
  return s;
}

// m-weighted projection of y onto { h >= lower, sum m (h+1)^q <= K }.
std::vector<double> project(std::span<const double> m, std::span<const double> y,
                            std::span<const double> lower, double q, double K) {
  const std::size_t k = m.size();
  std::vector<double> s(k);
  auto at = [&](double lambda) {
    for (std::size_t j = 0; j < k; ++j) {
      const double t = y[j] + 1.0;
      const double l = lower[j] + 1.0;
      if (t <= l) s[j] = l;
      else s[j] = lambda == 0.0 ? t : std::max(l, prox_root(t, lambda, q));
    }
    return power_sum(m, s, q);
  };
  double f_lo = at(0.0) - K;
  if (f_lo > 0.0) {
    // Illinois regula falsi on the decreasing map lambda -> sum m s^q - K,
    // finishing on the feasible side.
    double lo = 0.0, hi = 1.0;
    double f_hi = at(hi) - K;
    while (f_hi > 0.0 && hi < 1e300) {
      lo = hi;
      f_lo = f_hi;
      hi *= 4.0;
      f_hi = at(hi) - K;
    }
    int side = 0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      double mid = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
      if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
      const double fm = at(mid) - K;
      if (fm > 0.0) {
        lo = mid;
        f_lo = fm;
        if (side == -1) f_hi *= 0.5;
        side = -1;
      } else {
        hi = mid;
        f_hi = fm;
        if (side == 1) f_lo *= 0.5;
        side = 1;
        if (fm > -1e-15 * K) break;
      }
    }
    at(hi);
  }
  std::vector<double> g(k);
  for (std::size_t j = 0; j < k; ++j) g[j] = s[j] - 1.0;
  return g;
}

double objective(std::span<const double> m, std::span<const double> c, std::span<const double> g) {
  double v = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) v += m[j] * c[j] * g[j];
  return v;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

std::vector<double> random_masses(Rng& rng, std::size_t k, double sum) {
  std::vector<double> m(k);
  for (double& v : m) v = rng.uniform(0.05, 1.0);
  const double s = total(m);
  for (double& v : m) v *= sum / s;
  return m;
}

}  // namespace

void DiscreteInstance::validate() const {
  if (atom_masses.empty() || atom_masses.size() != f_values.size()) {
    throw std::invalid_argument("discrete instance: masses and values must have equal nonzero size");
  }
  for (double m : atom_masses) {
    if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("discrete instance: masses must be positive");
  }
}

Lemma25Result lemma25_check(const DiscreteInstance& inst, double a) {
  inst.validate();
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("lemma25_check: a must lie in (0, 1)");
  const auto& m = inst.atom_masses;
  const auto& f = inst.f_values;
  double mean = 0.0, pa = 0.0, tv = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (!(f[j] >= 0.0)) throw std::invalid_argument("lemma25_check: f must be nonnegative");
    mean += m[j] * f[j];
    pa += m[j] * std::pow(f[j], a);
    tv += m[j] * std::abs(f[j] - 1.0);
  }
  if (std::abs(mean - 1.0) > 1e-10) throw std::invalid_argument("lemma25_check: mu(f) must equal 1");
  Lemma25Result r;
  r.lhs = 1.0 - pa;
  r.tv = tv;
  r.upper_slack = 0.5 * tv - r.lhs;
  r.lower_slack = r.lhs - a * (1.0 - a) / 8.0 * tv * tv;
  return r;
}

double lemma25_extreme_ratio(double a, double alpha) {
  const double beta = 1.0 - alpha;
  const Lemma25Result r = lemma25_check({{alpha, beta}, {0.0, 1.0 / beta}, 0}, a);
  return r.lhs / (a * (1.0 - a) / 8.0 * r.tv * r.tv);
}

double lemma32_check(const DiscreteInstance& inst, double a, double p) {
  inst.validate();
  if (!(p > 2.0)) throw std::invalid_argument("lemma32_check: p must exceed 2");
  const auto& m = inst.atom_masses;
  const auto& f = inst.f_values;
  double sp_shift = 0.0, s2_shift = 0.0, sp = 0.0, s2 = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    const double d = f[j] - a;
    sp_shift += m[j] * std::pow(std::abs(d), p);
    s2_shift += m[j] * d * d;
    sp += m[j] * std::pow(std::abs(f[j]), p);
    s2 += m[j] * f[j] * f[j];
  }
  return ((p - 1.0) * std::pow(sp_shift, 2.0 / p) - s2_shift) - (std::pow(sp, 2.0 / p) - s2);
}

double lemma32_check(const Measure1D& mu, const GridFunction& f, double a, double p) {
  require_same_grid(mu.grid(), f.grid(), "lemma32_check");
  const auto w = mu.weights();
  return lemma32_check(DiscreteInstance{{w.begin(), w.end()}, {f.values().begin(), f.values().end()}, 0},
                       a, p);
}

LinearProgramResult maximize_linear_kkt(std::span<const double> m, std::span<const double> c,
                                        std::span<const double> lower, double q, double K) {
  validate_program(m, c, lower, q, K);
  const std::size_t k = m.size();
  // Active atoms carry s_j = kappa c_j^{1/(q-1)}; the rest sit on their bound.
  std::vector<double> s(k);
  auto at = [&](double kappa) {
    for (std::size_t j = 0; j < k; ++j) {
      const double l = lower[j] + 1.0;
      s[j] = c[j] > 0.0 ? std::max(l, kappa * std::pow(c[j], 1.0 / (q - 1.0))) : l;
    }
    return power_sum(m, s, q);
  };
  LinearProgramResult res;
  if (std::none_of(c.begin(), c.end(), [](double v) { return v > 0.0; })) {
    at(0.0);
  } else {
    double lo = 0.0, hi = 1.0;
    while (at(hi) <= K) {
      lo = hi;
      hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (at(mid) <= K ? lo : hi) = mid;
    }
    // Closed form for kappa on the active set found by bisection.
    at(lo);
    double fixed = 0.0, active = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double l = lower[j] + 1.0;
      if (c[j] > 0.0 && s[j] > l) active += m[j] * std::pow(c[j], q / (q - 1.0));
      else fixed += m[j] * std::pow(l, q);
    }
    if (active > 0.0 && K > fixed) {
      const double kappa = std::pow((K - fixed) / active, 1.0 / q);
      if (kappa >= lo && at(kappa) <= K * (1.0 + 1e-15)) lo = kappa;
    }
    at(lo);
  }
  res.g.resize(k);
  for (std::size_t j = 0; j < k; ++j) res.g[j] = s[j] - 1.0;
  res.value = objective(m, c, res.g);
  return res;
}

LinearProgramResult maximize_linear_over_power_ball(std::span<const double> m,
                                                    std::span<const double> c,
                                                    std::span<const double> lower, double q,
                                                    double K, int restarts,
                                                    std::uint64_t seed) {
  validate_program(m, c, lower, q, K);
  const std::size_t k = m.size();
  LinearProgramResult best;
  best.value = -kInf;
  double cscale = 0.0;
  for (double v : c) cscale = std::max(cscale, std::abs(v));
  if (cscale == 0.0) cscale = 1.0;
  for (int r = 0; r < std::max(1, restarts); ++r) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(r));
    std::vector<double> y(k);
    for (std::size_t j = 0; j < k; ++j) y[j] = lower[j] + rng.uniform(0.0, 2.0);
    std::vector<double> g = project(m, y, lower, q, K);
    double val = objective(m, c, g);
    double eta = rng.uniform(0.05, 0.5) / cscale;
    for (int it = 0; it < 300; ++it) {
      for (std::size_t j = 0; j < k; ++j) y[j] = g[j] + eta * c[j];
      std::vector<double> next = project(m, y, lower, q, K);
      const double nv = objective(m, c, next);
      const bool stalled = std::abs(nv - val) <= 1e-13 * std::max(1.0, std::abs(val));
      if (nv >= val) {
        g.swap(next);
        val = nv;
      }
      eta = std::min(eta * 2.0, 1e12 / cscale);
      if (stalled && it > 3) break;
    }
    if (val > best.value) {
      best.value = val;
      best.g = g;
    }
  }
  return best;
}

double lemma45_bruteforce(std::span<const double> masses, std::span<const std::size_t> subset,
                          double a, double K) {
  if (!(a > 1.0)) throw std::invalid_argument("lemma45_bruteforce: a must exceed 1");
  if (subset.empty()) throw std::invalid_argument("lemma45_bruteforce: subset must be nonempty");
  if (masses.size() > 8) throw std::invalid_argument("lemma45_bruteforce: at most 8 atoms");
  const double mx = total(masses);
  if (K < mx * (1.0 - 1e-14)) throw std::invalid_argument("lemma45_bruteforce: K < mu(X) is infeasible");
  std::vector<double> c(masses.size(), 0.0);
  for (std::size_t j : subset) {
    if (j >= masses.size()) throw std::invalid_argument("lemma45_bruteforce: subset index out of range");
    c[j] = 1.0;
  }
  if (K <= mx) return 0.0;
  const std::vector<double> lower(masses.size(), 0.0);
  return maximize_linear_over_power_ball(masses, c, lower, a / (a - 1.0), K, 100, 4545).value;
}

double lemma44_closed_form(std::span<const double> masses, std::span<const double> phi, double a,
                           double A) {
  if (!(a > 1.0) || !(A > 0.0)) throw std::invalid_argument("lemma44: need a > 1 and A > 0");
  double pa = 0.0, p1 = 0.0;
  for (std::size_t j = 0; j < masses.size(); ++j) {
    if (!(phi[j] >= 0.0)) throw std::invalid_argument("lemma44: phi must be nonnegative");
    pa += masses[j] * std::pow(phi[j], a);
    p1 += masses[j] * phi[j];
  }
  return A * std::pow(pa, 1.0 / a) - p1;
}

double lemma44_bruteforce(std::span<const double> masses, std::span<const double> phi, double a,
                          double A) {
  if (!(a > 1.0) || !(A > 0.0)) throw std::invalid_argument("lemma44: need a > 1 and A > 0");
  if (std::abs(total(masses) - 1.0) > 1e-12) throw std::invalid_argument("lemma44: masses must sum to 1");
  const double q = a / (a - 1.0);
  const std::vector<double> lower(masses.size(), -1.0);
  return maximize_linear_over_power_ball(masses, phi, lower, q, std::pow(A, q), 100, 4444).value;
}

Prop42Result prop42_sandwich_bruteforce(const HalfLineInstance& inst) {
  const std::size_t k = inst.masses.size();
  if (k == 0 || inst.conductances.size() != k) throw std::invalid_argument("prop42: size mismatch");
  if (k > 6) throw std::invalid_argument("prop42: at most 6 nodes");
  if (!(inst.q > 1.0)) throw std::invalid_argument("prop42: q must exceed 1");
  if (!(inst.K > total(inst.masses))) throw std::invalid_argument("prop42: K must exceed mu(X)");
  std::vector<std::size_t> finite;
  std::vector<double> resistance(k);
  double r = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double nu = inst.conductances[i];
    if (!(nu > 0.0)) throw std::invalid_argument("prop42: degenerate conductance");
    if (std::isfinite(nu)) {
      finite.push_back(i);
      r += 1.0 / nu;
    }
    resistance[i] = r;
  }
  if (finite.empty()) throw std::invalid_argument("prop42: degenerate conductances (all infinite)");

  const double a = inst.q / (inst.q - 1.0);
  const std::vector<double> lower(k, 0.0);
  Prop42Result res;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<std::size_t> tail(k - j);
    std::iota(tail.begin(), tail.end(), j);
    res.B = std::max(res.B, lemma45_closed_form(inst.masses, tail, a, inst.K) * resistance[j]);
  }

  // f = M e with unit energy |e|^2, e_i = sqrt(nu_i) (f_i - f_{i-1}) on finite edges.
  const auto cols = static_cast<Eigen::Index>(finite.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    const std::size_t edge = finite[static_cast<std::size_t>(c)];
    for (std::size_t j = edge; j < k; ++j) {
      M(static_cast<Eigen::Index>(j), c) = 1.0 / std::sqrt(inst.conductances[edge]);
    }
  }
  auto phi_of_square = [&](const std::vector<double>& f) {
    std::vector<double> c(k);
    for (std::size_t j = 0; j < k; ++j) c[j] = f[j] * f[j];
    return maximize_linear_kkt(inst.masses, c, lower, inst.q, inst.K);
  };
  auto energy = [&](const std::vector<double>& f) {
    double e = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (std::isfinite(inst.conductances[i])) e += inst.conductances[i] * (f[i] - prev) * (f[i] - prev);
      prev = f[i];
    }
    return e;
  };
  auto alternate = [&](std::vector<double> f) {
    double best = 0.0;
    for (int it = 0; it < 500; ++it) {
      const LinearProgramResult g = phi_of_square(f);
      const double value = g.value / energy(f);
      const bool done = value <= best * (1.0 + 1e-14);
      best = std::max(best, value);
      if (done && it > 0) break;
      Eigen::VectorXd w(static_cast<Eigen::Index>(k));
      for (std::size_t j = 0; j < k; ++j) w[static_cast<Eigen::Index>(j)] = inst.masses[j] * g.g[j];
      const Eigen::MatrixXd Q = M.transpose() * w.asDiagonal() * M;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
      const Eigen::VectorXd fv = M * es.eigenvectors().col(cols - 1);
      for (std::size_t j = 0; j < k; ++j) f[j] = fv[static_cast<Eigen::Index>(j)];
      if (energy(f) <= 0.0) break;
    }
    return best;
  };

  for (std::size_t j = 0; j < k; ++j) {
    if (j > 0 && resistance[j] == resistance[j - 1]) continue;
    std::vector<double> f(k);
    for (std::size_t i = 0; i < k; ++i) f[i] = std::min(resistance[i], resistance[j]);
    res.A = std::max(res.A, alternate(f));
  }
  Rng rng(4242);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> f(k);
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (std::isfinite(inst.conductances[i])) acc += rng.uniform(0.0, 1.0);
      f[i] = acc;
    }
    if (energy(f) > 0.0) res.A = std::max(res.A, alternate(f));
  }
  res.pass = res.B <= res.A * (1.0 + 1e-6) && res.A <= 4.0 * res.B * (1.0 + 1e-6);
  return res;
}

namespace {

struct Trial {
  double score = 0.0;  // slack (>= 0 good) or discrepancy (<= tol good)
  bool ok = true;
  std::string what;
};

SuiteResult run_suite(const char* name, std::size_t trials, double tolerance, bool slack_mode,
                      Exec exec, const std::function<Trial(std::size_t)>& one) {
  const Timer timer;
  std::vector<Trial> out(trials);
  for_each_index(trials, exec, [&](std::size_t i) { out[i] = one(i); });
  SuiteResult s;
  s.name = name;
  s.trials = trials;
  s.tolerance = tolerance;
  s.worst = slack_mode ? kInf : 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    s.worst = slack_mode ? std::min(s.worst, out[i].score) : std::max(s.worst, out[i].score);
    if (!out[i].ok) {
      if (s.violations == 0) s.first_violation = fmt::format("trial {}: {}", i, out[i].what);
      ++s.violations;
    }
  }
  s.seconds = timer.seconds();
  return s;
}

}  // namespace

SuiteResult lemma25_suite(std::size_t trials, std::uint64_t seed, Exec exec) {
  constexpr double tol = 1e-12;
  return run_suite("lemma25", trials, tol, true, exec, [&](std::size_t i) {
    Rng rng = Rng::stream(seed, i);
    const auto k = static_cast<std::size_t>(rng.integer(1, 8));
    DiscreteInstance inst{random_masses(rng, k, 1.0), std::vector<double>(k), seed};
    for (double& f : inst.f_values) f = rng.uniform() < 0.2 ? 0.0 : std::exp(2.0 * rng.normal());
    double mean = 0.0;
    for (std::size_t j = 0; j < k; ++j) mean += inst.atom_masses[j] * inst.f_values[j];
    for (double& f : inst.f_values) f = mean > 0.0 ? f / mean : 1.0;
    const double a = rng.uniform_open();
    const Lemma25Result r = lemma25_check(inst, a);
    const double slack = std::min(r.upper_slack, r.lower_slack);
    return Trial{slack, slack >= -tol,
                 fmt::format("a={} lhs={} upper_slack={} lower_slack={}", a, r.lhs, r.upper_slack,
                             r.lower_slack)};
  });
}

SuiteResult lemma32_suite(std::size_t trials, std::uint64_t seed, Exec exec) {
  constexpr double tol = 1e-10;
  return run_suite("lemma32", trials, tol, true, exec, [&](std::size_t i) {
    Rng rng = Rng::stream(seed, i);
    const auto k = static_cast<std::size_t>(rng.integer(1, 8));
    DiscreteInstance inst{random_masses(rng, k, 1.0), std::vector<double>(k), seed};
    for (double& f : inst.f_values) f = 3.0 * rng.normal();
    const double a = 3.0 * rng.normal();
    const double p = 2.0 + 8.0 * rng.uniform_open();
    const double slack = lemma32_check(inst, a, p);
    return Trial{slack, slack >= -tol, fmt::format("a={} p={} slack={}", a, p, slack)};
  });
}

SuiteResult lemma45_suite(std::size_t trials, std::uint64_t seed, Exec exec) {
  constexpr double tol = 1e-6;
  return run_suite("lemma45", trials, tol, false, exec, [&](std::size_t i) {
    Rng rng = Rng::stream(seed, i);
    const auto k = static_cast<std::size_t>(rng.integer(1, 8));
    const std::vector<double> m = random_masses(rng, k, rng.uniform(0.3, 1.0));
    std::vector<std::size_t> subset;
    for (std::size_t j = 0; j < k; ++j) {
      if (rng.uniform() < 0.5) subset.push_back(j);
    }
    if (subset.empty()) subset.push_back(static_cast<std::size_t>(rng.integer(0, static_cast<int>(k) - 1)));
    const double a = 1.0 + rng.uniform(0.1, 4.0);
    const double K = total(m) + rng.uniform(0.01, 2.0);
    const double closed = lemma45_closed_form(m, subset, a, K);
    const double brute = lemma45_bruteforce(m, subset, a, K);
    const double gap = std::abs(closed - brute);
    return Trial{gap, gap <= tol, fmt::format("a={} K={} closed={} brute={}", a, K, closed, brute)};
  });
}

SuiteResult lemma44_suite(std::size_t trials, std::uint64_t seed, Exec exec) {
  constexpr double tol = 1e-5;
  return run_suite("lemma44", trials, tol, false, exec, [&](std::size_t i) {
    Rng rng = Rng::stream(seed, i);
    const auto k = static_cast<std::size_t>(rng.integer(1, 8));
    const std::vector<double> m = random_masses(rng, k, 1.0);
    std::vector<double> phi(k);
    for (double& v : phi) v = rng.uniform() < 0.2 ? 0.0 : std::exp(rng.normal());
    const double a = rng.uniform(1.1, 5.0);
    const double A = 1.0 + rng.uniform(0.01, 3.0);
    const double closed = lemma44_closed_form(m, phi, a, A);
    const double brute = lemma44_bruteforce(m, phi, a, A);
    const double gap = std::abs(closed - brute);
    return Trial{gap, gap <= tol, fmt::format("a={} A={} closed={} brute={}", a, A, closed, brute)};
  });
}

SuiteResult prop42_suite(std::size_t trials, std::uint64_t seed, Exec exec) {
  constexpr double tol = 1e-6;
  return run_suite("prop42", trials, tol, false, exec, [&](std::size_t i) {
    Rng rng = Rng::stream(seed, i);
    HalfLineInstance inst;
    inst.masses = random_masses(rng, 5, rng.uniform(0.05, 0.5));
    inst.conductances.resize(5);
    for (double& c : inst.conductances) c = rng.uniform() < 0.1 ? kInf : std::exp(rng.normal());
    if (std::none_of(inst.conductances.begin(), inst.conductances.end(),
                     [](double c) { return std::isfinite(c); })) {
      inst.conductances[0] = 1.0;
    }
    const double p = rng.uniform(2.2, 8.0);
    inst.q = p / (p - 2.0);
    inst.K = i % 2 == 0 ? std::pow(p - 1.0, p / (p - 2.0)) + 1.0 : 1.0;
    const Prop42Result r = prop42_sandwich_bruteforce(inst);
    // Relative excess over the sandwich, <= 0 when it holds exactly.
    const double excess = std::max(r.B / r.A - 1.0, r.A / (4.0 * r.B) - 1.0);
    return Trial{std::max(0.0, excess), r.pass, fmt::format("p={} A={} B={}", p, r.A, r.B)};
  });
}

}  // namespace fil
