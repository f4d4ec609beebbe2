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

// Hardy-type two-sided bounds on the optimal constant C of
//
//   (mu|f|^p)^{2/p} - mu(f^2) <= C * int f'^2 dnu,   p > 2,
//
// on an interval, together with the small closed forms used to derive them.
// With a median m of mu, tail T(x) = mu([x, inf)) for x > m and resistance
// R(x) = int_m^x dt / n(t), each side's bound is the supremum over x of
//
//   T(x) * [(1 + K / T(x))^{(p-2)/p} - 1] * R(x)
//
// with K = 1/2 for the lower bound b and K = (p-1)^{p/(p-2)} for B. Then
// max(b-, b+) <= C <= 4 max(B-, B+), and the centred Sobolev constant is
// C / (p - 2).

#include <cstddef>
#include <span>
#include <vector>

#include "fil/kernels.hpp"
#include "fil/measure.hpp"

namespace fil {

/// Supremum values above this declare that no inequality is certified on
/// this support.
inline constexpr double kDivergenceCap = 1e6;

enum class HardySide { plus, minus };
enum class HardyVariant { lower_b, upper_B };

struct HardyValue {
  double value = 0.0;  ///< +inf when diverged
  double argmax = 0.0;
  bool diverged = false;
};

struct SobolevSandwich {
  double p = 0.0;
  double c_raw_lower = 0.0;  ///< max(b-, b+)
  double c_raw_upper = 0.0;  ///< 4 max(B-, B+)
  double cs_lower = 0.0;     ///< c_raw_lower / (p - 2)
  double cs_upper = 0.0;     ///< c_raw_upper / (p - 2)
  double argmax_lower = 0.0;
  double argmax_upper = 0.0;
  bool diverged = false;
  HardyValue b_minus, b_plus, B_minus, B_plus;
};

/// Signed integral of 1/n from m to every node, one O(n) sweep, with log n
/// taken linear within each cell.
std::vector<double> inv_density_cumulative(const NuDensity& nu, double m);

/// One side / variant of the Hardy supremum: grid scan, then golden-section
/// refinement between the neighbours of the best node.
HardyValue hardy_bound(const Measure1D& mu, const NuDensity& nu, double p, HardySide side,
                       HardyVariant variant, Exec exec = Exec::parallel);

/// All four suprema assembled into the two-sided bound. `diverged` is set when
/// any supremum or the assembled upper bound 4 max(B-, B+) exceeds the cap;
/// diverged fields are +inf.
SobolevSandwich sobolev_sandwich(const Measure1D& mu, const NuDensity& nu, double p,
                                 Exec exec = Exec::parallel);

/// sup { mu(1_A g) : g >= 0, mu((g+1)^{a/(a-1)}) <= K }
///   = mu(A) [(1 + (K - mu(X)) / mu(A))^{(a-1)/a} - 1].
double lemma45_closed_form(std::span<const double> atom_masses,
                           std::span<const std::size_t> subset, double a, double K);

/// Tight Sobolev constant implied by a defective inequality with constants
/// (A, B) and Poincare constant c_p: (p-1) A + c_p [(p-1) B - 1]^+.
double defective_to_tight(double A, double B, double c_p, double p);

}  // namespace fil
