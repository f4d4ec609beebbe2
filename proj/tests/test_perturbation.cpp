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

#include "fil/expression.hpp"
#include "fil/perturbation.hpp"
#include "oracles.hpp"

using namespace fil;

namespace {

Measure1D named(const std::string& spec, std::size_t n) {
  const auto d = MeasureDescriptor::parse(spec);
  return build_measure(d, default_grid(d, n));
}

GridFunction expr(const std::string& text, const GridSpec& g) { return Expression::parse(text).sample(g); }

}  // namespace

TEST_CASE("constant perturbations leave the measure unchanged") {
  const Measure1D mu = named("jacobi:n=4", 501);
  const PerturbedMeasure pm = perturb(mu, GridFunction::constant(mu.grid(), 3.7));
  CHECK(pm.osc == 0.0);
  for (std::size_t i = 0; i < 501; ++i) REQUIRE(std::abs(pm.measure.weights()[i] - mu.weights()[i]) <= 1e-14);
  for (std::size_t j = 0; j < mu.cell_masses().size(); ++j) {
    REQUIRE(std::abs(pm.measure.cell_masses()[j] - mu.cell_masses()[j]) <= 1e-14);
  }
}

TEST_CASE("oscillation and reweighting") {
  const Measure1D jac = named("jacobi:n=4", 4001);
  CHECK(std::abs(perturb(jac, expr("cos(2*x)", jac.grid())).osc - 2.0) <= 1e-6);

  const Measure1D uni = named("uniform", 2001);
  const PerturbedMeasure pm = perturb(uni, expr("x", uni.grid()));
  CHECK(pm.osc == doctest::Approx(1.0).epsilon(1e-14));
  const double z = oracle::simpson([](double x) { return std::exp(-x); }, 0.0, 1.0);
  CHECK(z == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  for (std::size_t i = 0; i < 2001; i += 100) {
    const double x = uni.grid().node(i);
    CHECK(pm.measure.density()[i] == doctest::Approx(std::exp(-x) / z).epsilon(1e-6));
  }
  CHECK(pm.measure.support_note().find("perturb") != std::string::npos);
}

TEST_CASE("property: shifting u by a constant changes nothing") {
  Rng rng(77);
  const Measure1D mu = named("gaussian", 301);
  for (int trial = 0; trial < 50; ++trial) {
    const auto field = oracle::random_positive_field(rng, 301, 4, 2.0);
    std::vector<double> u(301), v(301);
    const double c = rng.uniform(-50.0, 50.0);
    for (std::size_t i = 0; i < 301; ++i) {
      u[i] = std::log(field[i]);
      v[i] = u[i] + c;
    }
    const PerturbedMeasure a = perturb(mu, GridFunction(mu.grid(), u));
    const PerturbedMeasure b = perturb(mu, GridFunction(mu.grid(), v));
    REQUIRE(std::abs(a.osc - b.osc) <= 1e-14 * std::max(1.0, std::abs(c)));
    for (std::size_t i = 0; i < 301; ++i) REQUIRE(std::abs(a.measure.weights()[i] - b.measure.weights()[i]) <= 1e-14);
  }
}

TEST_CASE("non-finite perturbations are rejected") {
  const Measure1D mu = named("uniform", 11);
  std::vector<double> u(11, 0.0);
  u[4] = INFINITY;
  CHECK_THROWS_AS(perturb(mu, GridFunction(mu.grid(), u)), InputError);
}

TEST_CASE("perturbation checks") {
  OptimizerOptions opt;
  opt.seeds = 8;
  const Measure1D jac = named("jacobi:n=4", 801);

  const PerturbationReport zero = perturbation_check(jac, GridFunction::constant(jac.grid(), 0.0), 4.0, opt);
  CHECK(zero.factor == 1.0);
  CHECK(!zero.inconclusive);
  CHECK(zero.pass);

  const PerturbationReport cos2 = perturbation_check(jac, expr("cos(2*x)", jac.grid()), 4.0, opt);
  CHECK(cos2.factor == doctest::Approx(std::exp(2.0)).epsilon(1e-5));
  CHECK(!cos2.inconclusive);
  CHECK(cos2.pass);
  CHECK(cos2.perturbed_emp <= cos2.factor * cos2.base_upper * 1.01);

  const Measure1D uni = named("uniform", 801);
  const PerturbationReport bump = perturbation_check(uni, expr("5*exp(-100*(x-0.5)^2)", uni.grid()), 4.0, opt);
  CHECK(bump.pass);
  CHECK(bump.factor == doctest::Approx(std::exp(bump.osc)));
  CHECK(bump.osc == doctest::Approx(5.0 * (1.0 - std::exp(-25.0))).epsilon(1e-6));

  const PerturbationReport low = perturbation_check(uni, expr("x", uni.grid()), 1.0, opt);
  CHECK(low.inconclusive);
}
