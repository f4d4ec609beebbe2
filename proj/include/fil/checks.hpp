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

// Brute-force oracles for the discrete lemmas behind the bounds, and the
// fixed-seed randomized suites built on them. Maximizations return values at
// feasible points, so they are lower bounds on the suprema they estimate.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fil/grid.hpp"
#include "fil/kernels.hpp"
#include "fil/measure.hpp"

namespace fil {

struct DiscreteInstance {
  std::vector<double> atom_masses;  ///< positive
  std::vector<double> f_values;     ///< one per atom
  std::uint64_t rng_seed = 0;

  /// Throws std::invalid_argument on non-positive masses or size mismatch.
  void validate() const;
};

struct Lemma25Result {
  double lhs = 0.0;          ///< 1 - mu(f^a)
  double tv = 0.0;           ///< mu|f - 1|
  double upper_slack = 0.0;  ///< tv / 2 - lhs
  double lower_slack = 0.0;  ///< lhs - a (1 - a) / 8 * tv^2
};

/// Requires a in (0, 1), f >= 0 and |mu(f) - 1| <= 1e-10.
Lemma25Result lemma25_check(const DiscreteInstance& inst, double a);

/// Two atoms (alpha, 1 - alpha) with f = (0, 1 / (1 - alpha)): the ratio of
/// 1 - mu(f^a) to its lower bound. Recorded for the alpha -> 1 probe only.
double lemma25_extreme_ratio(double a, double alpha);

/// [(p-1)(mu|f-a|^p)^{2/p} - mu(f-a)^2] - [(mu|f|^p)^{2/p} - mu f^2], p > 2.
double lemma32_check(const DiscreteInstance& inst, double a, double p);
double lemma32_check(const Measure1D& mu, const GridFunction& f, double a, double p);

/// Maximizes sum_j m_j c_j g_j over g_j >= lower_j with
/// sum_j m_j (g_j + 1)^q <= K (q > 1) by projected gradient ascent in the
/// m-weighted metric with `restarts` random feasible starts. Throws
/// std::invalid_argument when the constraint set is empty.
struct LinearProgramResult {
  double value = 0.0;
  std::vector<double> g;
};
LinearProgramResult maximize_linear_over_power_ball(std::span<const double> masses,
                                                    std::span<const double> c,
                                                    std::span<const double> lower, double q,
                                                    double K, int restarts,
                                                    std::uint64_t seed);

/// The same maximum from the KKT conditions, written in closed form per atom
/// with a scalar root for the multiplier.
LinearProgramResult maximize_linear_kkt(std::span<const double> masses,
                                        std::span<const double> c,
                                        std::span<const double> lower, double q, double K);

/// sup { sum_A g m : g >= 0, sum (g+1)^{a/(a-1)} m <= K } by projected
/// gradient with 100 restarts. Returns 0 when K equals mu(X).
double lemma45_bruteforce(std::span<const double> atom_masses,
                          std::span<const std::size_t> subset, double a, double K);

/// A (mu phi^a)^{1/a} - mu(phi) for a probability vector of masses.
double lemma44_closed_form(std::span<const double> masses, std::span<const double> phi, double a,
                           double A);
/// sup { mu(phi g) : g >= -1, mu((g+1)^{a/(a-1)}) <= A^{a/(a-1)} } by
/// projected gradient.
double lemma44_bruteforce(std::span<const double> masses, std::span<const double> phi, double a,
                          double A);

/// Discrete half-line m = t_0 < t_1 < ... < t_k: atoms of mu at t_1..t_k and
/// edge conductances nu_i on [t_{i-1}, t_i] (+inf glues the two nodes). The
/// family G is { g >= 0 : sum_j m_j (g_j + 1)^q <= K }.
struct HalfLineInstance {
  std::vector<double> masses;
  std::vector<double> conductances;
  double K = 0.0;
  double q = 2.0;
};

struct Prop42Result {
  double A = 0.0;  ///< best phi(f^2) / energy found, a lower bound on A
  double B = 0.0;  ///< exact: max_j phi(1_{[t_j, inf)}) * sum_{i<=j} 1/nu_i
  bool pass = true;
};

/// B from the closed form for phi of an indicator; A by alternating
/// maximization over f (top eigenvector for fixed g) and g (exact KKT step
/// for fixed f), started from the cut witnesses and random g.
Prop42Result prop42_sandwich_bruteforce(const HalfLineInstance& inst);

struct SuiteResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double worst = 0.0;        ///< smallest slack, or largest discrepancy
  double tolerance = 0.0;
  std::string first_violation;
  double seconds = 0.0;
  bool pass() const { return violations == 0; }
};

SuiteResult lemma25_suite(std::size_t trials, std::uint64_t seed, Exec exec = Exec::parallel);
SuiteResult lemma32_suite(std::size_t trials, std::uint64_t seed, Exec exec = Exec::parallel);
SuiteResult lemma45_suite(std::size_t trials, std::uint64_t seed, Exec exec = Exec::parallel);
SuiteResult lemma44_suite(std::size_t trials, std::uint64_t seed, Exec exec = Exec::parallel);
SuiteResult prop42_suite(std::size_t trials, std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace fil
