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

#include "fil/measure.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

namespace fil {

namespace {

constexpr double kTailTarget = 1e-10;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw InputError(fmt::format("{}: '{}' is not a number", context, t));
  }
  if (used != t.size()) {
    throw InputError(fmt::format("{}: '{}' is not a number", context, t));
  }
  return v;
}

// Unnormalized potential V with density exp(-V) for the symmetric families.
double potential(const MeasureDescriptor& d, double x) {
  switch (d.family) {
    case MeasureFamily::gaussian: {
      const double s = d.param("sigma", 1.0);
      return 0.5 * x * x / (s * s);
    }
    case MeasureFamily::exp_power:
      return std::pow(std::abs(x), d.param("alpha", 2.0));
    case MeasureFamily::double_well: {
      const double q = x * x - 1.0;
      return d.param("depth", 1.0) * q * q;
    }
    default:
      return 0.0;
  }
}

// Two-sided omitted mass of exp(-V) beyond |x| > L, by quadrature.
double numeric_tail(const MeasureDescriptor& d, double L) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [&](double x) { return std::exp(-potential(d, x)); };
  const double total = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity());
  const double tail = integrator.integrate(f, L, std::numeric_limits<double>::infinity());
  return tail / total;
}

double find_truncation(const MeasureDescriptor& d) {
  double lo = 0.0;
  double hi = 1.0;
  while (omitted_tail_mass(d, hi) >= kTailTarget) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw InputError("cannot find a truncation point for " + d.to_string());
  }
  for (int it = 0; it < 200 && hi - lo > 1e-6 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (omitted_tail_mass(d, mid) < kTailTarget ? hi : lo) = mid;
  }
  // Round up to a quarter so the support is a readable number.
  return std::ceil(hi * 4.0) / 4.0;
}

}  // namespace

Measure1D Measure1D::from_log_density(const GridSpec& grid, std::vector<double> log_density,
                                      std::string support_note,
                                      std::vector<double> cell_log_density) {
  const std::size_t n = grid.n;
  if (log_density.size() != n) {
    throw std::invalid_argument("log-density length does not match grid");
  }
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : log_density) {
    if (!std::isfinite(v)) throw InputError("log-density contains a non-finite value");
    peak = std::max(peak, v);
  }
  const double h = grid.delta();
  std::vector<double> raw(n);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    raw[i] = std::exp(log_density[i] - peak);
    z += (i == 0 || i + 1 == n ? 0.5 : 1.0) * raw[i];
  }
  z *= h;
  if (!(z > 0.0) || !std::isfinite(z)) throw InputError("measure has zero total mass");

  Measure1D mu;
  mu.grid_ = grid;
  mu.log_density_ = std::move(log_density);
  mu.support_note_ = std::move(support_note);
  mu.density_.resize(n);
  mu.weights_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    mu.density_[i] = raw[i] / z;
    mu.weights_[i] = (i == 0 || i + 1 == n ? 0.5 : 1.0) * h * mu.density_[i];
  }
  mu.cdf_.assign(n, 0.0);
  mu.survival_.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    mu.cdf_[i] = mu.cdf_[i - 1] + 0.5 * h * (mu.density_[i - 1] + mu.density_[i]);
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    mu.survival_[i] = mu.survival_[i + 1] + 0.5 * h * (mu.density_[i] + mu.density_[i + 1]);
  }

  constexpr std::size_t q = kGaussPoints;
  if (cell_log_density.empty()) {
    cell_log_density.resize((n - 1) * q);
    for (std::size_t c = 0; c + 1 < n; ++c) {
      for (std::size_t k = 0; k < q; ++k) {
        const double t = kGaussNodes[k];
        cell_log_density[c * q + k] = (1.0 - t) * mu.log_density_[c] + t * mu.log_density_[c + 1];
      }
    }
  }
  if (cell_log_density.size() != (n - 1) * q) {
    throw std::invalid_argument("cell log-density length does not match grid");
  }
  double cell_peak = -std::numeric_limits<double>::infinity();
  for (double v : cell_log_density) {
    if (!std::isfinite(v)) throw InputError("log-density contains a non-finite value");
    cell_peak = std::max(cell_peak, v);
  }
  mu.cell_masses_.resize(cell_log_density.size());
  double zc = 0.0;
  for (std::size_t j = 0; j < cell_log_density.size(); ++j) {
    mu.cell_masses_[j] = kGaussWeights[j % q] * std::exp(cell_log_density[j] - cell_peak);
    zc += mu.cell_masses_[j];
  }
  mu.cell_totals_.assign(n - 1, 0.0);
  for (std::size_t j = 0; j < mu.cell_masses_.size(); ++j) {
    mu.cell_masses_[j] /= zc;
    mu.cell_totals_[j / q] += mu.cell_masses_[j];
  }
  mu.cell_log_density_ = std::move(cell_log_density);
  return mu;
}

NuDensity::NuDensity(GridSpec g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.n) throw std::invalid_argument("nu density length does not match grid");
  for (double x : values) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw InputError("reference density n(t) must be finite and strictly positive");
    }
  }
}

NuDensity NuDensity::same_as(const Measure1D& mu) {
  return NuDensity(mu.grid(), std::vector<double>(mu.density().begin(), mu.density().end()));
}

double MeasureDescriptor::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

MeasureDescriptor MeasureDescriptor::parse(const std::string& text) {
  MeasureDescriptor d;
  const std::string t = trim(text);
  const auto colon = t.find(':');
  const std::string name = t.substr(0, colon);
  const std::string rest = colon == std::string::npos ? std::string{} : t.substr(colon + 1);

  if (name == "table") {
    d.family = MeasureFamily::table;
    d.table_path = trim(rest);
    if (d.table_path.empty()) throw InputError("table descriptor needs a path: table:<file.csv>");
    read_measure_table(d.table_path, d.table_x, d.table_log_density);
    return d;
  }
  if (name == "uniform") {
    d.family = MeasureFamily::uniform;
  } else if (name == "gaussian") {
    d.family = MeasureFamily::gaussian;
  } else if (name == "jacobi") {
    d.family = MeasureFamily::jacobi;
  } else if (name == "exppower" || name == "exp-power") {
    d.family = MeasureFamily::exp_power;
  } else if (name == "doublewell" || name == "double-well") {
    d.family = MeasureFamily::double_well;
  } else {
    throw InputError("unknown measure family '" + name + "'");
  }

  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("measure parameter '" + item + "' lacks '='");
    const std::string key = trim(item.substr(0, eq));
    d.params[key] = parse_number(item.substr(eq + 1), "measure parameter " + key);
  }

  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : d.params) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
        throw InputError("unknown parameter '" + k + "' for measure " + name);
      }
    }
  };
  switch (d.family) {
    case MeasureFamily::uniform:
      allow({"a", "b"});
      if (!(d.param("a", 0.0) < d.param("b", 1.0))) throw InputError("uniform requires a < b");
      break;
    case MeasureFamily::gaussian:
      allow({"sigma"});
      if (!(d.param("sigma", 1.0) > 0.0)) throw InputError("gaussian requires sigma > 0");
      break;
    case MeasureFamily::jacobi: {
      allow({"n"});
      const double n = d.param("n", 4.0);
      if (n < 3.0 || n != std::floor(n)) throw InputError("jacobi requires an integer n >= 3");
      break;
    }
    case MeasureFamily::exp_power:
      allow({"alpha"});
      if (!(d.param("alpha", 2.0) > 0.0)) throw InputError("exppower requires alpha > 0");
      break;
    case MeasureFamily::double_well:
      allow({"depth"});
      if (!(d.param("depth", 1.0) > 0.0)) throw InputError("doublewell requires depth > 0");
      break;
    case MeasureFamily::table:
      break;
  }
  return d;
}

std::string MeasureDescriptor::to_string() const {
  switch (family) {
    case MeasureFamily::uniform:
      return fmt::format("uniform:a={},b={}", param("a", 0.0), param("b", 1.0));
    case MeasureFamily::gaussian:
      return fmt::format("gaussian:sigma={}", param("sigma", 1.0));
    case MeasureFamily::jacobi:
      return fmt::format("jacobi:n={}", param("n", 4.0));
    case MeasureFamily::exp_power:
      return fmt::format("exppower:alpha={}", param("alpha", 2.0));
    case MeasureFamily::double_well:
      return fmt::format("doublewell:depth={}", param("depth", 1.0));
    case MeasureFamily::table:
      return "table:" + table_path;
  }
  return {};
}

void read_measure_table(const std::string& path, std::vector<double>& x,
                        std::vector<double>& log_density) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open measure table '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InputError("measure table '" + path + "' is empty");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line = line.substr(3);
  if (trim(line) != "x,logdensity") {
    throw InputError("measure table header must be 'x,logdensity'");
  }
  x.clear();
  log_density.clear();
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw InputError(fmt::format("measure table row {}: expected two columns", row));
    }
    const std::string ctx = fmt::format("measure table row {}", row);
    const double xv = parse_number(line.substr(0, comma), ctx);
    const double lv = parse_number(line.substr(comma + 1), ctx);
    if (!std::isfinite(xv) || !std::isfinite(lv)) {
      throw InputError(ctx + ": non-finite value");
    }
    x.push_back(xv);
    log_density.push_back(lv);
  }
  if (x.size() < 11) throw InputError("measure table needs at least 11 rows");
  const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw InputError("measure table x must be strictly increasing");
    const double expected = x.front() + static_cast<double>(i) * h;
    if (std::abs(x[i] - expected) > 1e-6 * h) {
      throw InputError(fmt::format(
          "measure table x is not uniformly spaced at row {} (resampling is not supported)", i + 2));
    }
  }
}

double omitted_tail_mass(const MeasureDescriptor& d, double L) {
  switch (d.family) {
    case MeasureFamily::gaussian:
      return std::erfc(L / (d.param("sigma", 1.0) * std::numbers::sqrt2));
    case MeasureFamily::exp_power: {
      const double a = d.param("alpha", 2.0);
      return boost::math::gamma_q(1.0 / a, std::pow(L, a));
    }
    case MeasureFamily::double_well:
      return numeric_tail(d, L);
    default:
      return 0.0;
  }
}

GridSpec default_grid(const MeasureDescriptor& d, std::size_t n) {
  switch (d.family) {
    case MeasureFamily::uniform:
      return GridSpec::make(d.param("a", 0.0), d.param("b", 1.0), n);
    case MeasureFamily::jacobi: {
      // Cell-centred nodes: the density vanishes on the boundary itself.
      const double half_cell = 0.5 * std::numbers::pi / static_cast<double>(n);
      return GridSpec::make(-0.5 * std::numbers::pi + half_cell,
                            0.5 * std::numbers::pi - half_cell, n);
    }
    case MeasureFamily::gaussian: {
      const double L = 8.0 * d.param("sigma", 1.0);
      return GridSpec::make(-L, L, n);
    }
    case MeasureFamily::exp_power:
    case MeasureFamily::double_well: {
      const double L = find_truncation(d);
      return GridSpec::make(-L, L, n);
    }
    case MeasureFamily::table:
      if (d.table_x.empty()) throw InputError("table descriptor has no data");
      return GridSpec::make(d.table_x.front(), d.table_x.back(), d.table_x.size());
  }
  throw InputError("unsupported measure family");
}

Measure1D build_measure(const MeasureDescriptor& d, const GridSpec& grid) {
  std::vector<double> ld(grid.n);
  std::vector<double> cell_ld;
  std::string note;
  // Analytic log-density at the Gauss points for the named families.
  auto sample_cells = [&](auto&& log_density_at) {
    constexpr std::size_t q = Measure1D::kGaussPoints;
    cell_ld.resize((grid.n - 1) * q);
    for (std::size_t c = 0; c + 1 < grid.n; ++c) {
      for (std::size_t k = 0; k < q; ++k) {
        cell_ld[c * q + k] = log_density_at(grid.node(c) + Measure1D::kGaussNodes[k] * grid.delta());
      }
    }
  };
  switch (d.family) {
    case MeasureFamily::uniform: {
      const double a = d.param("a", 0.0);
      const double b = d.param("b", 1.0);
      if (grid.x_min < a || grid.x_max > b) throw InputError("grid extends outside uniform support");
      note = fmt::format("compact support [{}, {}]", a, b);
      break;
    }
    case MeasureFamily::jacobi: {
      const double k = d.param("n", 4.0);
      const double half_pi = 0.5 * std::numbers::pi;
      if (grid.x_min <= -half_pi || grid.x_max >= half_pi) {
        throw InputError("jacobi grid must lie strictly inside (-pi/2, pi/2)");
      }
      auto at = [k](double x) { return (k - 1.0) * std::log(std::cos(x)); };
      for (std::size_t i = 0; i < grid.n; ++i) ld[i] = at(grid.node(i));
      sample_cells(at);
      note = fmt::format("open support (-pi/2, pi/2) sampled on [{:.9g}, {:.9g}]", grid.x_min,
                         grid.x_max);
      break;
    }
    case MeasureFamily::gaussian:
    case MeasureFamily::exp_power:
    case MeasureFamily::double_well: {
      auto at = [&d](double x) { return -potential(d, x); };
      for (std::size_t i = 0; i < grid.n; ++i) ld[i] = at(grid.node(i));
      sample_cells(at);
      double omitted = 0.0;
      omitted += grid.x_min < 0.0 ? 0.5 * omitted_tail_mass(d, -grid.x_min) : 0.5;
      omitted += grid.x_max > 0.0 ? 0.5 * omitted_tail_mass(d, grid.x_max) : 0.5;
      note = fmt::format("truncated to [{:.9g}, {:.9g}]; omitted analytic tail mass {:.3e}",
                         grid.x_min, grid.x_max, omitted);
      break;
    }
    case MeasureFamily::table: {
      const GridSpec table_grid = default_grid(d, d.table_x.size());
      require_same_grid(grid, table_grid, "table measure");
      ld = d.table_log_density;
      note = fmt::format("tabulated on [{:.9g}, {:.9g}] from {}", grid.x_min, grid.x_max,
                         d.table_path);
      break;
    }
  }
  return Measure1D::from_log_density(grid, std::move(ld), std::move(note), std::move(cell_ld));
}

double integrate(const Measure1D& mu, std::span<const double> f) {
  const auto w = mu.weights();
  if (f.size() != w.size()) throw std::invalid_argument("integrate: grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += f[i] * w[i];
  return s;
}

double integrate(const Measure1D& mu, const GridFunction& f) {
  require_same_grid(mu.grid(), f.grid(), "integrate");
  return integrate(mu, f.values());
}

double median(const Measure1D& mu) {
  const auto cdf = mu.cdf();
  const auto& g = mu.grid();
  const std::size_t n = cdf.size();
  constexpr double flat = 1e-14;
  std::size_t lo = 0;
  while (lo < n && cdf[lo] < 0.5 - flat) ++lo;
  std::size_t hi = lo;
  while (hi + 1 < n && cdf[hi + 1] <= 0.5 + flat) ++hi;
  if (lo < n && hi > lo && cdf[lo] <= 0.5 + flat) {
    return 0.5 * (g.node(lo) + g.node(hi));
  }
  if (lo == 0) return g.node(0);
  if (lo >= n) return g.node(n - 1);
  const double c0 = cdf[lo - 1];
  const double c1 = cdf[lo];
  const double t = (0.5 - c0) / (c1 - c0);
  return g.node(lo - 1) + t * (g.node(lo) - g.node(lo - 1));
}

double tail_mass(const Measure1D& mu, double x, TailSide side) {
  const auto& g = mu.grid();
  if (std::isnan(x)) throw std::invalid_argument("tail_mass: x is NaN");
  // The measure lives on the grid, so beyond either end the tails are 0 or 1.
  if (x < g.x_min) return side == TailSide::right ? 1.0 : 0.0;
  if (x > g.x_max) return side == TailSide::right ? 0.0 : 1.0;
  const auto table = side == TailSide::right ? mu.survival() : mu.cdf();
  const double s = (x - g.x_min) / g.delta();
  std::size_t i = static_cast<std::size_t>(std::floor(s));
  i = std::min(i, g.n - 2);
  const double t = std::clamp(s - static_cast<double>(i), 0.0, 1.0);
  return std::clamp(table[i] + t * (table[i + 1] - table[i]), 0.0, 1.0);
}

}  // namespace fil
