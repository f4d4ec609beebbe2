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


#include <cstdlib>
#include <string>
#include <vector>

#include <doctest.h>

#include "fil/hardy.hpp"
#include "fil/kernels.hpp"
#include "fil/variational.hpp"
#include "oracles.hpp"

using namespace fil;

namespace {

Measure1D named(const std::string& spec, std::size_t n) {
  const auto d = MeasureDescriptor::parse(spec);
  return build_measure(d, default_grid(d, n));
}

}  // namespace

TEST_CASE("hardy bracket asymptotics") {
  CHECK(hardy_bracket(0.0, 0.5, 4.0) == 0.0);
  const double tiny = 1e-301;
  CHECK(hardy_bracket(tiny, 0.5, 4.0) == doctest::Approx(std::sqrt(0.5 * tiny)).epsilon(1e-12));
  CHECK(hardy_bracket(0.25, 0.5, 4.0) == doctest::Approx(0.25 * (std::sqrt(3.0) - 1.0)).epsilon(1e-14));
}

TEST_CASE("hardy_profile serial and parallel agree bit for bit") {
  Rng rng(5);
  std::vector<double> tail(100000), res(100000), a(100000), b(100000);
  for (std::size_t i = 0; i < tail.size(); ++i) {
    tail[i] = rng.uniform();
    res[i] = rng.uniform(0.0, 10.0);
  }
  hardy_profile(tail, res, 9.0, 4.0, a, Exec::serial);
  hardy_profile(tail, res, 9.0, 4.0, b, Exec::parallel);
  CHECK(a == b);
  std::vector<double> short_out(3);
  CHECK_THROWS_AS(hardy_profile(tail, res, 9.0, 4.0, short_out, Exec::serial), std::invalid_argument);
}

TEST_CASE("sandwich serial and parallel agree bit for bit") {
  const Measure1D mu = named("jacobi:n=4", 2001);
  const NuDensity nu = NuDensity::same_as(mu);
  const SobolevSandwich s = sobolev_sandwich(mu, nu, 4.0, Exec::serial);
  const SobolevSandwich p = sobolev_sandwich(mu, nu, 4.0, Exec::parallel);
  CHECK(s.c_raw_lower == p.c_raw_lower);
  CHECK(s.c_raw_upper == p.c_raw_upper);
  CHECK(s.argmax_upper == p.argmax_upper);
}

TEST_CASE("multi-start optimizer is schedule independent") {
  const Measure1D mu = named("jacobi:n=4", 201);
  OptimizerOptions opt;
  opt.seeds = 6;
  opt.max_iter = 60;
  opt.exec = Exec::serial;
  const EmpiricalConstant s = maximize_constant(mu, 4.0, opt);
  opt.exec = Exec::parallel;
  const EmpiricalConstant p = maximize_constant(mu, 4.0, opt);
  CHECK(s.value == p.value);
  CHECK(s.seed_label == p.seed_label);
  REQUIRE(s.seeds.size() == p.seeds.size());
  for (std::size_t k = 0; k < s.seeds.size(); ++k) CHECK(s.seeds[k].value == p.seeds[k].value);
}

TEST_CASE("for_each_index visits every index once") {
  std::vector<int> hits(1000, 0);
  for_each_index(hits.size(), Exec::parallel, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) REQUIRE(h == 1);
}

TEST_CASE("FIL_THREADS caps the worker count") {
  unsetenv("FIL_THREADS");
  const int before = configure_threads_from_env();
  setenv("FIL_THREADS", "1", 1);
  CHECK(configure_threads_from_env() == 1);
  setenv("FIL_THREADS", "not-a-number", 1);
  CHECK(configure_threads_from_env() == 1);
  setenv("FIL_THREADS", std::to_string(before).c_str(), 1);
  CHECK(configure_threads_from_env() == before);
  unsetenv("FIL_THREADS");
}
