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

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fil/grid.hpp"

namespace fil {

/// Grid-discretized probability measure mu(dx) = Z^{-1} exp(log_density) dx.
///
/// Integration is the composite trapezoid rule: interior nodes carry mass
/// density_i * delta, the two endpoints half of that. The CDF is accumulated
/// from the left and the survival function from the right, so both tails are
/// available without cancellation against 1.
class Measure1D {
 public:
  /// Normalizes an unnormalized log-density sampled on `grid`.
  /// Throws InputError on non-finite entries or zero total mass.
  /// `cell_log_density`, if given, holds the same log-density (same additive
  /// constant) at the kGaussPoints Gauss-Legendre points of every cell, cell
  /// by cell; otherwise it is interpolated linearly from the nodes.
  static Measure1D from_log_density(const GridSpec& grid,
                                    std::vector<double> log_density,
                                    std::string support_note = {},
                                    std::vector<double> cell_log_density = {});

  /// Gauss-Legendre rule on a unit cell: nodes in (0, 1), weights sum to 1.
  static constexpr int kGaussPoints = 4;
  static constexpr std::array<double, 4> kGaussNodes = {
      0.069431844202973712, 0.33000947820757187, 0.66999052179242813, 0.93056815579702629};
  static constexpr std::array<double, 4> kGaussWeights = {
      0.17392742256872693, 0.32607257743127307, 0.32607257743127307, 0.17392742256872693};

  const GridSpec& grid() const { return grid_; }
  std::span<const double> log_density() const { return log_density_; }
  /// Normalized density dmu/dx at the nodes.
  std::span<const double> density() const { return density_; }
  /// Trapezoid masses, sum to 1.
  std::span<const double> weights() const { return weights_; }
  /// cdf[i] = mu((-inf, x_i]).
  std::span<const double> cdf() const { return cdf_; }
  /// survival[i] = mu([x_i, +inf)).
  std::span<const double> survival() const { return survival_; }
  /// Continuous representation: log-density at the Gauss points of every
  /// cell, and the matching masses normalized to total 1 over [x_min, x_max].
  std::span<const double> cell_log_density() const { return cell_log_density_; }
  std::span<const double> cell_masses() const { return cell_masses_; }
  /// Gauss-rule mass of cell [x_c, x_{c+1}], length n - 1.
  std::span<const double> cell_totals() const { return cell_totals_; }
  /// Human-readable truncation / support record for reports.
  const std::string& support_note() const { return support_note_; }

 private:
  Measure1D() = default;

  GridSpec grid_;
  std::vector<double> log_density_;
  std::vector<double> density_;
  std::vector<double> weights_;
  std::vector<double> cdf_;
  std::vector<double> survival_;
  std::vector<double> cell_log_density_;
  std::vector<double> cell_masses_;
  std::vector<double> cell_totals_;
  std::string support_note_;
};

/// Positive reference density n(t) of nu(dt) = n(t) dt on a grid.
struct NuDensity {
  GridSpec grid;
  std::vector<double> values;

  /// Validates strict positivity and finiteness.
  NuDensity(GridSpec grid, std::vector<double> values);

  /// n = dmu/dx, the "same-as-mu" choice that makes the weighted Dirichlet
  /// form equal to the integral of f'^2 dmu.
  static NuDensity same_as(const Measure1D& mu);
};

enum class MeasureFamily { uniform, gaussian, jacobi, exp_power, double_well, table };

/// Parsed measure descriptor, e.g. "gaussian:sigma=2", "jacobi:n=4",
/// "exppower:alpha=1.5", "doublewell:depth=2", "uniform:a=0,b=1",
/// "table:density.csv".
struct MeasureDescriptor {
  MeasureFamily family = MeasureFamily::uniform;
  std::map<std::string, double> params;
  std::string table_path;
  /// Table contents, filled by parse() for table descriptors.
  std::vector<double> table_x;
  std::vector<double> table_log_density;

  static MeasureDescriptor parse(const std::string& text);
  std::string to_string() const;
  double param(const std::string& key, double fallback) const;
};

/// Reads a `x,logdensity` CSV. Throws InputError on malformed rows,
/// non-increasing or non-uniform x, or non-finite values.
void read_measure_table(const std::string& path, std::vector<double>& x,
                        std::vector<double>& log_density);

/// Default support for a family: the unit interval for uniform, the open
/// interval (-pi/2, pi/2) inset by half a cell for jacobi, a symmetric
/// truncation with omitted analytic tail mass < 1e-10 for the unbounded
/// families, and the table's own nodes for tables.
GridSpec default_grid(const MeasureDescriptor& desc, std::size_t n);

/// Samples the family's log-density on `grid` and normalizes.
Measure1D build_measure(const MeasureDescriptor& desc, const GridSpec& grid);

/// Analytic two-sided tail mass omitted by truncating the family to
/// [-half_width, half_width] (0 for compactly supported families).
double omitted_tail_mass(const MeasureDescriptor& desc, double half_width);

/// mu(f) = sum_i f_i w_i.
double integrate(const Measure1D& mu, const GridFunction& f);
double integrate(const Measure1D& mu, std::span<const double> f);

/// Median by linear interpolation of the nodal CDF; the midpoint of the flat
/// stretch when the CDF equals 1/2 on an interval.
double median(const Measure1D& mu);

enum class TailSide { left, right };

/// right: mu([x, inf)); left: mu((-inf, x]); linear between nodes, and 0 or 1
/// outside the grid.
double tail_mass(const Measure1D& mu, double x, TailSide side);

}  // namespace fil
