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
#include <limits>
#include <vector>

#include <doctest.h>

#include "fil/checks.hpp"
#include "fil/hardy.hpp"
#include "oracles.hpp"

using namespace fil;

TEST_CASE("power-moment deficit bounds: examples") {
  const Lemma25Result fixed = lemma25_check({{0.3, 0.7}, {1.0, 1.0}, 0}, 0.5);
  CHECK(fixed.lhs == doctest::Approx(0.0));
  CHECK(fixed.upper_slack == doctest::Approx(0.0));
  CHECK(fixed.lower_slack == doctest::Approx(0.0));

  const Lemma25Result r = lemma25_check({{0.9, 0.1}, {0.0, 10.0}, 0}, 0.5);
  CHECK(r.lhs == doctest::Approx(1.0 - 0.1 * std::sqrt(10.0)).epsilon(1e-14));
  CHECK(r.tv == doctest::Approx(1.8).epsilon(1e-14));
  CHECK(r.upper_slack == doctest::Approx(0.9 - r.lhs).epsilon(1e-14));
  CHECK(r.lower_slack == doctest::Approx(r.lhs - 3.24 / 32.0).epsilon(1e-14));
  CHECK_THROWS_AS(lemma25_check({{0.5, 0.5}, {1.0, 2.0}, 0}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(lemma25_check({{0.5, 0.5}, {1.0}, 0}, 0.5), std::invalid_argument);
}

TEST_CASE("power-moment deficit: extreme two-atom ratios stay finite") {
  // Recorded, not a sharpness claim: the ratio settles near 7.9 as alpha -> 1.
  for (double alpha : {0.5, 0.9, 0.99, 0.999, 0.9999, 0.999999}) {
    const double r = lemma25_extreme_ratio(0.5, alpha);
    CHECK(std::isfinite(r));
    CHECK(r >= 1.0);
    CHECK(r < 10.0);
  }
}

TEST_CASE("shifted Sobolev functional comparison: examples") {
  CHECK(lemma32_check({{1.0}, {1.0}, 0}, 0.0, 4.0) == doctest::Approx(2.0));
  CHECK(std::abs(lemma32_check({{0.2, 0.8}, {1.3, 1.3}, 0}, 1.3, 4.0)) <= 1e-14);
  const auto d = MeasureDescriptor::parse("uniform");
  const Measure1D mu = build_measure(d, default_grid(d, 201));
  const GridFunction f = GridFunction::sample(mu.grid(), [](double x) { return 1.0 + x; });
  CHECK(lemma32_check(mu, f, 0.7, 3.0) >= -1e-10);
}

TEST_CASE("power-ball maximization examples") {
  const std::vector<double> one{1.0};
  const std::vector<std::size_t> all{0};
  CHECK(lemma45_bruteforce(one, all, 2.0, 2.0) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-6));
  const std::vector<double> two{0.5, 0.5};
  const std::vector<std::size_t> first{0};
  CHECK(lemma45_bruteforce(two, first, 2.0, 2.0) == doctest::Approx(0.5 * (std::sqrt(3.0) - 1.0)).epsilon(1e-6));
  CHECK(lemma45_bruteforce(two, first, 2.0, 1.0) == 0.0);
}

TEST_CASE("property: projected gradient agrees with the KKT solution") {
  Rng rng(88);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t k = 1 + static_cast<std::size_t>(rng.integer(0, 5));
    const auto m = oracle::random_masses(rng, k);
    std::vector<double> c(k), lower(k);
    for (std::size_t j = 0; j < k; ++j) {
      c[j] = rng.uniform(-1.0, 2.0);
      lower[j] = rng.uniform() < 0.5 ? 0.0 : -1.0;
    }
    const double q = rng.uniform(1.2, 4.0);
    double floor_cost = 0.0;
    for (std::size_t j = 0; j < k; ++j) floor_cost += m[j] * std::pow(lower[j] + 1.0, q);
    const double K = floor_cost + rng.uniform(0.1, 3.0);
    const LinearProgramResult kkt = maximize_linear_kkt(m, c, lower, q, K);
    const LinearProgramResult pg = maximize_linear_over_power_ball(m, c, lower, q, K, 10, 5 + trial);
    CAPTURE(trial);
    CHECK(pg.value <= kkt.value + 1e-9);
    CHECK(pg.value == doctest::Approx(kkt.value).epsilon(1e-6));
    double cost = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      CHECK(kkt.g[j] >= lower[j] - 1e-15);
      cost += m[j] * std::pow(kkt.g[j] + 1.0, q);
    }
    CHECK(cost <= K * (1.0 + 1e-12));
  }
}

TEST_CASE("dual power-norm closed form against brute force") {
  const std::vector<double> m{0.25, 0.25, 0.5};
  const std::vector<double> phi{0.2, 1.0, 0.6};
  for (double a : {1.5, 2.0, 3.0}) {
    for (double A : {1.2, 2.0}) {
      CHECK(lemma44_bruteforce(m, phi, a, A) == doctest::Approx(lemma44_closed_form(m, phi, a, A)).epsilon(1e-5));
    }
  }
}

TEST_CASE("half-line sandwich instances") {
  const Prop42Result single = prop42_sandwich_bruteforce({{0.3}, {2.0}, 3.0, 2.0});
  CHECK(single.A == doctest::Approx(single.B).epsilon(1e-12));
  CHECK(single.pass);

  const double inf = std::numeric_limits<double>::infinity();
  const Prop42Result glued = prop42_sandwich_bruteforce({{0.1, 0.2, 0.15}, {1.0, inf, 3.0}, 2.5, 3.0});
  CHECK(std::isfinite(glued.A));
  CHECK(std::isfinite(glued.B));
  CHECK(glued.B <= glued.A * (1.0 + 1e-9));
  CHECK(glued.A <= 4.0 * glued.B * (1.0 + 1e-9));
  CHECK(glued.pass);
}

TEST_CASE("suites pass and reproduce") {
  const SuiteResult a = lemma25_suite(2000, 2026);
  const SuiteResult b = lemma25_suite(2000, 2026);
  CHECK(a.pass());
  CHECK(a.trials == 2000);
  CHECK(a.worst == b.worst);
  CHECK(lemma32_suite(2000, 2026).pass());
  CHECK(lemma45_suite(5, 2026).pass());
  CHECK(lemma44_suite(5, 2026).pass());
  const SuiteResult p = prop42_suite(20, 2026);
  CHECK(p.pass());
  CHECK(p.worst == prop42_suite(20, 2026).worst);
}

TEST_CASE("suites are schedule independent") {
  const SuiteResult s = lemma32_suite(500, 9, Exec::serial);
  const SuiteResult p = lemma32_suite(500, 9, Exec::parallel);
  CHECK(s.worst == p.worst);
  CHECK(s.violations == p.violations);
  CHECK(prop42_suite(10, 3, Exec::serial).worst == prop42_suite(10, 3, Exec::parallel).worst);
}
