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


#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include <doctest.h>

#include "fil/measure.hpp"
#include "oracles.hpp"

using namespace fil;

namespace {

Measure1D named(const std::string& spec, std::size_t n) {
  const auto d = MeasureDescriptor::parse(spec);
  return build_measure(d, default_grid(d, n));
}

Measure1D exponential_on_0_30(std::size_t n) {
  const GridSpec g = GridSpec::make(0.0, 30.0, n);
  std::vector<double> ld(n);
  for (std::size_t i = 0; i < n; ++i) ld[i] = -g.node(i);
  return Measure1D::from_log_density(g, ld);
}

}  // namespace

TEST_CASE("uniform trapezoid weights") {
  const Measure1D mu = named("uniform", 2001);
  const auto w = mu.weights();
  CHECK(w.front() == doctest::Approx(0.5 / 2000).epsilon(1e-12));
  CHECK(w.back() == doctest::Approx(0.5 / 2000).epsilon(1e-12));
  for (std::size_t i = 1; i + 1 < w.size(); ++i) REQUIRE(w[i] == doctest::Approx(1.0 / 2000).epsilon(1e-12));
}

TEST_CASE("gaussian weights follow exp(-x^2/2)") {
  const Measure1D mu = named("gaussian", 4001);
  const auto& g = mu.grid();
  CHECK(g.x_min == -8.0);
  CHECK(g.x_max == 8.0);
  const double z = std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < g.n; i += 97) {
    const double x = g.node(i);
    CHECK(mu.density()[i] == doctest::Approx(std::exp(-0.5 * x * x) / z).epsilon(1e-8));
  }
}

TEST_CASE("jacobi density normalizer against Simpson") {
  const Measure1D mu = named("jacobi:n=4", 4001);
  const double z = oracle::simpson([](double x) { return std::pow(std::cos(x), 3); },
                                   -0.5 * std::numbers::pi, 0.5 * std::numbers::pi);
  CHECK(z == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
  // The inset grid omits O(h^4) mass at each end; the density is renormalized on it.
  const double ratio = mu.density()[2000] / (1.0 / z);
  CHECK(ratio == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("weights, cell masses and CDF invariants across families") {
  for (const char* spec : {"uniform", "uniform:a=-2,b=3", "gaussian", "gaussian:sigma=0.5",
                           "jacobi:n=4", "jacobi:n=7", "exppower:alpha=1.5", "doublewell:depth=2"}) {
    CAPTURE(spec);
    const Measure1D mu = named(spec, 1001);
    double s = 0.0;
    for (double w : mu.weights()) s += w;
    CHECK(std::abs(s - 1.0) <= 1e-12);
    double c = 0.0;
    for (double w : mu.cell_totals()) c += w;
    CHECK(std::abs(c - 1.0) <= 1e-12);
    for (std::size_t i = 1; i < mu.cdf().size(); ++i) REQUIRE(mu.cdf()[i] >= mu.cdf()[i - 1]);
    CHECK(mu.cdf().back() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mu.survival().front() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("truncation of unbounded families omits less than 1e-10") {
  for (const char* spec : {"gaussian", "gaussian:sigma=3", "exppower:alpha=1", "exppower:alpha=3",
                           "doublewell:depth=1"}) {
    CAPTURE(spec);
    const auto d = MeasureDescriptor::parse(spec);
    const GridSpec g = default_grid(d, 1001);
    CHECK(omitted_tail_mass(d, g.x_max) < 1e-10);
    CHECK(!build_measure(d, g).support_note().empty());
  }
}

TEST_CASE("integrate") {
  const Measure1D u = named("uniform", 2001);
  CHECK(integrate(u, GridFunction::constant(u.grid(), 3.5)) == doctest::Approx(3.5).epsilon(1e-13));
  CHECK(integrate(u, GridFunction::sample(u.grid(), [](double x) { return x; })) ==
        doctest::Approx(0.5).epsilon(1e-14));
  const Measure1D g = named("gaussian", 4001);
  const double m2 = integrate(g, GridFunction::sample(g.grid(), [](double x) { return x * x; }));
  const double oracle = oracle::simpson(
      [](double x) { return x * x * std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); },
      -8.0, 8.0);
  CHECK(std::abs(m2 - 1.0) <= 1e-8);
  CHECK(std::abs(m2 - oracle) <= 1e-8);
}

TEST_CASE("median") {
  CHECK(median(named("uniform", 2001)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(median(named("gaussian", 4001))) <= 1e-10);
  CHECK(std::abs(median(exponential_on_0_30(30001)) - std::log(2.0)) <= 1e-6);
}

TEST_CASE("tail mass") {
  CHECK(tail_mass(named("uniform", 2001), 0.75, TailSide::right) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(tail_mass(named("jacobi:n=4", 4001), 0.0, TailSide::right) == doctest::Approx(0.5).epsilon(1e-12));
  const double t = tail_mass(exponential_on_0_30(30001), 1.0, TailSide::right);
  CHECK(std::abs(t - std::exp(-1.0)) <= 1e-6);
  const Measure1D g = named("gaussian", 401);
  for (double x : {-9.0, -3.0, 0.3, 8.0, 12.0}) {
    const double r = tail_mass(g, x, TailSide::right);
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
  }
  CHECK(tail_mass(g, -9.0, TailSide::right) == 1.0);
  CHECK(tail_mass(g, 12.0, TailSide::left) == 1.0);
}

TEST_CASE("descriptor errors") {
  CHECK_THROWS_AS(MeasureDescriptor::parse("cauchy"), InputError);
  CHECK_THROWS_AS(MeasureDescriptor::parse("gaussian:sigma=-1"), InputError);
  CHECK_THROWS_AS(MeasureDescriptor::parse("gaussian:mu=1"), InputError);
  CHECK_THROWS_AS(MeasureDescriptor::parse("uniform:a=1,b=0"), InputError);
  CHECK_THROWS_AS(MeasureDescriptor::parse("jacobi:n=abc"), InputError);
  CHECK_THROWS_AS(MeasureDescriptor::parse("table:/nonexistent/file.csv"), InputError);
  CHECK_THROWS_AS(GridSpec::make(0.0, 1.0, 5), std::invalid_argument);
}

TEST_CASE("descriptor round trip") {
  for (const char* spec : {"uniform:a=0,b=2", "gaussian:sigma=2", "jacobi:n=5", "exppower:alpha=1.5",
                           "doublewell:depth=3"}) {
    const auto d = MeasureDescriptor::parse(spec);
    CHECK(MeasureDescriptor::parse(d.to_string()).to_string() == d.to_string());
  }
}

TEST_CASE("measure tables") {
  const std::string path = "fil_test_table.csv";
  {
    std::ofstream f(path);
    f << "x,logdensity\n";
    for (int i = 0; i <= 200; ++i) {
      const double x = -4.0 + 0.04 * i;
      f << x << "," << -0.5 * x * x << "\n";
    }
  }
  const auto d = MeasureDescriptor::parse("table:" + path);
  const Measure1D mu = build_measure(d, default_grid(d, 0));
  CHECK(mu.grid().n == 201);
  CHECK(std::abs(median(mu)) <= 1e-10);

  {
    std::ofstream f(path);
    f << "x,logdensity\n0,0\n1,abc\n2,0\n";
  }
  CHECK_THROWS_AS(MeasureDescriptor::parse("table:" + path), InputError);
  {
    std::ofstream f(path);
    f << "x,logdensity\n";
    for (int i = 0; i < 20; ++i) f << (i == 7 ? 6.5 : i) << ",0\n";
  }
  CHECK_THROWS_AS(MeasureDescriptor::parse("table:" + path), InputError);
  std::remove(path.c_str());
}

TEST_CASE("from_log_density rejects bad input") {
  const GridSpec g = GridSpec::make(0.0, 1.0, 11);
  std::vector<double> ld(11, 0.0);
  ld[3] = NAN;
  CHECK_THROWS_AS(Measure1D::from_log_density(g, ld), InputError);
  CHECK_THROWS_AS(Measure1D::from_log_density(g, std::vector<double>(5, 0.0)), std::invalid_argument);
}

TEST_CASE("property: random log-densities normalize and keep ordered tails") {
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 11 + static_cast<std::size_t>(rng.integer(0, 300));
    const GridSpec g = GridSpec::make(-rng.uniform(0.1, 5.0), rng.uniform(0.1, 5.0), n);
    std::vector<double> ld(n);
    for (double& v : ld) v = rng.uniform(-20.0, 20.0);
    const Measure1D mu = Measure1D::from_log_density(g, ld);
    double s = 0.0;
    for (double w : mu.weights()) {
      REQUIRE(w >= 0.0);
      s += w;
    }
    REQUIRE(std::abs(s - 1.0) <= 1e-12);
    const double m = median(mu);
    REQUIRE(tail_mass(mu, m, TailSide::left) == doctest::Approx(0.5).epsilon(1e-9));
  }
}
