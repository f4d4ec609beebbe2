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
#include <string>

#include <doctest.h>

#include "fil/phi_entropy.hpp"
#include "oracles.hpp"

using namespace fil;

namespace {

Measure1D uniform(std::size_t n) {
  const auto d = MeasureDescriptor::parse("uniform");
  return build_measure(d, default_grid(d, n));
}

// 2 on [0, 1/2), 0 on (1/2, 1], the midpoint node 1 so that mu(f) = 1 exactly.
GridFunction half_indicator(const GridSpec& g, double floor) {
  return GridFunction::sample(g, [floor](double x) {
    if (x < 0.5 - 1e-12) return 2.0 + floor;
    if (x > 0.5 + 1e-12) return floor;
    return 1.0 + floor;
  });
}

GridFunction random_density(const Measure1D& mu, Rng& rng) {
  auto f = oracle::random_positive_field(rng, mu.grid().n, 6, 3.0);
  const double m = integrate(mu, f);
  for (double& v : f) v /= m;
  return GridFunction(mu.grid(), f);
}

}  // namespace

TEST_CASE("phi values and derivatives") {
  CHECK(phi(PhiFamily(4.0), 1.0, 0) == doctest::Approx(-1.0));
  CHECK(phi(PhiFamily(2.0), 1.0, 0) == doctest::Approx(0.0));
  CHECK(phi(PhiFamily(2.0), 1.0, 2) == doctest::Approx(1.0));
  CHECK(phi(PhiFamily(4.0), 4.0, 2) == doctest::Approx(1.0 / 32.0).epsilon(1e-14));
  CHECK(phi(PhiFamily(0.0), 0.3, 0) == doctest::Approx(std::exp(0.3)));
  CHECK(PhiFamily(0.0).admissible(-5.0));
  CHECK(!PhiFamily(4.0).admissible(0.0));
}

TEST_CASE("phi derivatives agree with central differences") {
  const double h = 1e-5;
  for (double p : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 7.0}) {
    const PhiFamily fam(p);
    for (double x : {0.3, 1.0, 2.5}) {
      CAPTURE(p);
      CAPTURE(x);
      const double d1 = (fam(x + h) - fam(x - h)) / (2 * h);
      const double d2 = (fam(x + h, 1) - fam(x - h, 1)) / (2 * h);
      CHECK(fam(x, 1) == doctest::Approx(d1).epsilon(1e-7));
      CHECK(fam(x, 2) == doctest::Approx(d2).epsilon(1e-7));
    }
  }
}

TEST_CASE("entropy examples") {
  const Measure1D mu = uniform(2001);
  for (double p : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    CHECK(std::abs(entropy(mu, GridFunction::constant(mu.grid(), 1.7), p)) <= 1e-12);
  }
  // The jump costs the trapezoid rule O(h).
  const GridFunction f = half_indicator(mu.grid(), 1e-12);
  CHECK(entropy(mu, f, 2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-3));
  CHECK(entropy(mu, f, 4.0) == doctest::Approx(1.0 - std::sqrt(2.0) / 2.0).epsilon(1e-3));
  CHECK_THROWS(entropy(mu, GridFunction::constant(mu.grid(), -1.0), 4.0));
}

TEST_CASE("variational entropy") {
  const Measure1D mu = uniform(2001);
  const GridFunction f = GridFunction::sample(mu.grid(), [](double x) { return 1.0 + x; });
  const VariationalEntropy v = entropy_variational(mu, f, 2.0);
  CHECK(v.c_star == doctest::Approx(1.5).epsilon(1e-6));
  const VariationalEntropy c = entropy_variational(mu, GridFunction::constant(mu.grid(), 2.0), 4.0);
  CHECK(c.value == doctest::Approx(0.0));
  CHECK(c.c_star == doctest::Approx(2.0));

  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const GridFunction g = random_density(mu, rng);
    for (double p : {0.0, 0.5, 1.0, 2.0, 3.0, 4.0}) {
      CAPTURE(p);
      REQUIRE(std::abs(entropy_variational(mu, g, p).value - entropy(mu, g, p)) <= 1e-8);
    }
  }
}

TEST_CASE("phi Dirichlet form") {
  const Measure1D mu = uniform(4001);
  CHECK(phi_dirichlet(mu, GridFunction::constant(mu.grid(), 3.0), 2.0) == 0.0);
  const GridFunction f = GridFunction::sample(mu.grid(), [](double x) { return 1.0 + x; });
  CHECK(std::abs(phi_dirichlet(mu, f, 2.0) - std::log(2.0)) <= 1e-4);
  CHECK(std::abs(phi_dirichlet(mu, f, 4.0) - 0.5 * (1.0 - 1.0 / std::sqrt(2.0))) <= 1e-4);
}

TEST_CASE("distances") {
  const Measure1D mu = uniform(2001);
  const Distances z = distances(mu, GridFunction::constant(mu.grid(), 1.0));
  CHECK(z.tv == 0.0);
  CHECK(std::abs(z.hellinger) <= 1e-6);
  const Distances d = distances(mu, half_indicator(mu.grid(), 0.0));
  CHECK(d.tv == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(d.hellinger == doctest::Approx(std::sqrt(2.0 * (1.0 - std::sqrt(2.0) / 2.0))).epsilon(1e-3));
  CHECK(d.hellinger * d.hellinger <= d.tv);
  CHECK(d.tv <= 2.0 * d.hellinger);
  CHECK_THROWS_AS(distances(mu, GridFunction::constant(mu.grid(), 2.0)), std::invalid_argument);
}

TEST_CASE("property: Gibbs-Su sandwich and the power-moment bounds on random densities") {
  const Measure1D mu = uniform(257);
  Rng rng(2303);
  for (int trial = 0; trial < 1000; ++trial) {
    const GridFunction f = random_density(mu, rng);
    const Distances d = distances(mu, f);
    REQUIRE(d.hellinger * d.hellinger <= d.tv + 1e-12);
    REQUIRE(d.tv <= 2.0 * d.hellinger + 1e-12);

    const double p = rng.uniform(2.05, 12.0);
    const double a = 2.0 / p;
    std::vector<double> pw(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) pw[i] = std::pow(f[i], a);
    const double lhs = 1.0 - integrate(mu, pw);
    REQUIRE(lhs <= 0.5 * d.tv + 1e-12);
    REQUIRE(lhs >= a * (1.0 - a) / 8.0 * d.tv * d.tv - 1e-12);
  }
}

TEST_CASE("epsilon floor") {
  const GridSpec g = GridSpec::make(0.0, 1.0, 11);
  const GridFunction f = epsilon_floor(GridFunction::constant(g, 0.0));
  CHECK(f.min() == 1e-12);
  CHECK(epsilon_floor(GridFunction::constant(g, 2.0), 0.5).min() == 2.0);
}
