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


#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <doctest.h>

#include "fil/variational.hpp"
#include "oracles.hpp"

using namespace fil;

namespace {

Measure1D named(const std::string& spec, std::size_t n) {
  const auto d = MeasureDescriptor::parse(spec);
  return build_measure(d, default_grid(d, n));
}

}  // namespace

TEST_CASE("rayleigh examples") {
  const Measure1D jac = named("jacobi:n=4", 4001);
  const GridFunction f = GridFunction::sample(jac.grid(), [](double x) { return std::sin(x) + 2.0; });
  CHECK(rayleigh(jac, f, 1.0) == doctest::Approx(0.25).epsilon(4e-3));

  const Measure1D uni = named("uniform", 2001);
  const GridFunction g =
      GridFunction::sample(uni.grid(), [](double x) { return 1.0 + 0.3 * std::cos(std::numbers::pi * x); });
  CHECK(rayleigh(uni, g, 4.0) > 0.0);
  CHECK_THROWS_AS(rayleigh(uni, GridFunction::constant(uni.grid(), 1.0), 4.0), std::domain_error);
}

TEST_CASE("rayleigh of 2 + cos(pi x) on the uniform measure approaches 1/pi^2 for p = 1") {
  const Measure1D uni = named("uniform", 2001);
  const GridFunction g =
      GridFunction::sample(uni.grid(), [](double x) { return 2.0 + std::cos(std::numbers::pi * x); });
  CHECK(rayleigh(uni, g, 1.0) == doctest::Approx(1.0 / (std::numbers::pi * std::numbers::pi)).epsilon(1e-6));
}

TEST_CASE("property: rayleigh is scale invariant") {
  Rng rng(55);
  for (const char* spec : {"uniform", "jacobi:n=4", "gaussian"}) {
    const Measure1D mu = named(spec, 201);
    for (int trial = 0; trial < 20; ++trial) {
      const auto f = oracle::random_positive_field(rng, 201, 5, 1.5);
      const double lambda = std::exp(rng.uniform(-3.0, 3.0));
      std::vector<double> g(f);
      for (double& v : g) v *= lambda;
      for (double p : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) {
        CAPTURE(spec);
        CAPTURE(p);
        REQUIRE(rayleigh(mu, g, p) == doctest::Approx(rayleigh(mu, f, p)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("property: analytic gradient matches central differences") {
  Rng rng(1234);
  const double h = 1e-6;
  for (const char* spec : {"uniform", "jacobi:n=4", "gaussian", "doublewell:depth=2"}) {
    const Measure1D mu = named(spec, 41);
    for (double p : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0}) {
      for (int point = 0; point < 10; ++point) {
        CAPTURE(spec);
        CAPTURE(p);
        std::vector<double> z(41);
        for (double& v : z) v = rng.uniform(-1.0, 1.0);
        const RayleighEval e = rayleigh_objective(mu, z, p);
        double gmax = 0.0;
        for (double v : e.gradient) gmax = std::max(gmax, std::abs(v));
        double err = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
          std::vector<double> zp(z), zm(z);
          zp[i] += h;
          zm[i] -= h;
          const double fd = (rayleigh_objective(mu, zp, p).value - rayleigh_objective(mu, zm, p).value) / (2 * h);
          err = std::max(err, std::abs(fd - e.gradient[i]));
        }
        REQUIRE(err <= 1e-5 * gmax);

        // Directional derivative along a random direction.
        std::vector<double> v(41), zp(z), zm(z);
        double dir = 0.0;
        for (std::size_t i = 0; i < 41; ++i) {
          v[i] = rng.normal();
          zp[i] += h * v[i];
          zm[i] -= h * v[i];
          dir += v[i] * e.gradient[i];
        }
        const double fd = (rayleigh_objective(mu, zp, p).value - rayleigh_objective(mu, zm, p).value) / (2 * h);
        REQUIRE(std::abs(fd - dir) <= 1e-5 * std::max(std::abs(dir), gmax));
      }
    }
  }
}

TEST_CASE("the gradient vanishes along constants") {
  const Measure1D mu = named("jacobi:n=4", 101);
  Rng rng(8);
  std::vector<double> z(101);
  for (double& v : z) v = rng.uniform(-1.0, 1.0);
  for (double p : {0.0, 1.0, 2.0, 4.0}) {
    const RayleighEval e = rayleigh_objective(mu, z, p);
    double s = 0.0, a = 0.0;
    for (double g : e.gradient) {
      s += g;
      a += std::abs(g);
    }
    CHECK(std::abs(s) <= 1e-10 * a);
  }
}

TEST_CASE("spectral gap values") {
  CHECK(spectral_gap(named("uniform", 2001)) == doctest::Approx(std::numbers::pi * std::numbers::pi).epsilon(1e-3));
  CHECK(std::abs(spectral_gap(named("jacobi:n=4", 4001)) - 4.0) <= 4e-3);
  CHECK(std::abs(spectral_gap(named("gaussian", 4001)) - 1.0) <= 1e-2);
  CHECK(spectral_gap(named("gaussian:sigma=2", 4001)) == doctest::Approx(0.25).epsilon(1e-2));
}

TEST_CASE("spectral gap agrees with a dense eigensolve") {
  for (const char* spec : {"uniform", "jacobi:n=4", "gaussian", "exppower:alpha=1", "doublewell:depth=2"}) {
    CAPTURE(spec);
    const Measure1D mu = named(spec, 201);
    const Generator gen(mu);
    const auto ev = oracle::generator_spectrum(gen);
    CHECK(std::abs(ev[0]) <= 1e-8 * ev[1]);
    const SpectralGap g = spectral_gap_eigenpair(gen);
    CHECK(g.lambda1 == doctest::Approx(ev[1]).epsilon(1e-9));
    CHECK(g.c_p == doctest::Approx(1.0 / ev[1]).epsilon(1e-9));
    // The eigenfunction is mean zero with unit variance.
    double m = 0.0, v = 0.0;
    for (std::size_t i = 0; i < 201; ++i) {
      m += mu.weights()[i] * g.eigenfunction[i];
      v += mu.weights()[i] * g.eigenfunction[i] * g.eigenfunction[i];
    }
    CHECK(std::abs(m) <= 1e-10);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Hardy witness") {
  const Measure1D mu = named("uniform", 2001);
  const NuDensity nu = NuDensity::same_as(mu);
  const GridFunction w = hardy_witness(mu, nu, 0.9, HardySide::plus);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double t = mu.grid().node(i);
    const double expect = t > 0.5 ? std::min(t, 0.9) - 0.5 : 0.0;
    REQUIRE(std::abs(w[i] - expect) <= 1e-12);
  }
  const GridFunction m = hardy_witness(mu, nu, 0.2, HardySide::minus);
  CHECK(m[1000] == 0.0);
  CHECK(m[0] == doctest::Approx(m[200]));

  // Witness at the b+ argmax realizes at least half the lower bound.
  const HardyValue b = hardy_bound(mu, nu, 4.0, HardySide::plus, HardyVariant::lower_b);
  std::vector<double> f(w.size());
  const GridFunction at = hardy_witness(mu, nu, b.argmax, HardySide::plus);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = at[i] + kWitnessShift;
  const double r = rayleigh(mu, f, 4.0);
  CHECK(r >= 0.5 * b.value / 2.0);
  CHECK(r >= 0.0145);
}

TEST_CASE("maximize_constant on small grids") {
  OptimizerOptions opt;
  opt.seeds = 8;
  const Measure1D jac = named("jacobi:n=4", 801);
  const EmpiricalConstant p1 = maximize_constant(jac, 1.0, opt);
  CHECK(std::abs(p1.value - 0.25) <= 1e-3);
  CHECK(p1.seeds.size() == 8);
  CHECK(p1.value == doctest::Approx(rayleigh(jac, p1.witness, 1.0)).epsilon(1e-14));

  const EmpiricalConstant p4 = maximize_constant(jac, 4.0, opt);
  CHECK(p4.value <= 0.2505);
  CHECK(p4.value >= 0.20);
  for (const SeedResult& s : p4.seeds) CHECK(s.value <= p4.value);

  const Measure1D uni = named("uniform", 801);
  const EmpiricalConstant u1 = maximize_constant(uni, 1.0, opt);
  CHECK(u1.value == doctest::Approx(1.0 / spectral_gap(uni)).epsilon(1e-3));
}

TEST_CASE("property: converged estimates stay below the certified upper bound") {
  OptimizerOptions opt;
  opt.seeds = 4;
  opt.max_iter = 200;
  for (const char* spec : {"uniform", "jacobi:n=4", "jacobi:n=6"}) {
    const Measure1D mu = named(spec, 401);
    for (double p : {2.5, 3.0, 4.0}) {
      CAPTURE(spec);
      CAPTURE(p);
      const SobolevSandwich s = sobolev_sandwich(mu, NuDensity::same_as(mu), p);
      const EmpiricalConstant e = maximize_constant(mu, p, opt);
      if (!s.diverged) CHECK(e.value <= s.cs_upper * 1.01);
    }
  }
}

TEST_CASE("cross-p consistency checks") {
  OptimizerOptions opt;
  opt.seeds = 6;
  const Measure1D jac = named("jacobi:n=4", 801);
  const std::vector<double> ps{0.5, 1.0, 1.5, 4.0};
  const TheoremAReport rep = theorem_a_check(jac, ps, opt);
  CHECK(rep.pass);
  CHECK(rep.rows.size() == 4);
  CHECK(rep.c_p_exact == doctest::Approx(0.25).epsilon(2e-3));
  for (const auto& a : rep.assertions) {
    CAPTURE(a.name);
    CHECK(a.pass);
  }

  const Measure1D uni = named("uniform", 801);
  const std::vector<double> one{1.0};
  const TheoremAReport u = theorem_a_check(uni, one, opt);
  CHECK(u.pass);
  CHECK(u.rows[0].empirical == doctest::Approx(u.c_p_exact).epsilon(1e-3));
}

TEST_CASE("gaussian log-Sobolev estimate approaches 1 from below") {
  const EmpiricalConstant e = maximize_constant(named("gaussian", 4001), 2.0);
  CHECK(e.value >= 0.80);
  CHECK(e.value <= 1.02);
}
