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


// Serial reference against the OpenMP path for each parallel kernel. Run with
// FIL_THREADS=k to fix the worker count.

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "fil/checks.hpp"
#include "fil/hardy.hpp"
#include "fil/kernels.hpp"
#include "fil/rng.hpp"
#include "fil/variational.hpp"

namespace {

using namespace fil;

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

const Measure1D& jacobi(std::size_t n) {
  static const auto d = MeasureDescriptor::parse("jacobi:n=4");
  static const Measure1D mu = build_measure(d, default_grid(d, n));
  return mu;
}

void BM_HardyProfile(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  Rng rng(1);
  std::vector<double> tail(n), res(n), out(n);
  for (std::size_t i = 0; i < n; ++i) {
    tail[i] = rng.uniform();
    res[i] = rng.uniform(0.0, 10.0);
  }
  for (auto _ : state) {
    hardy_profile(tail, res, 9.0, 4.0, out, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(n));
}
BENCHMARK(BM_HardyProfile)->ArgNames({"parallel", "n"})->ArgsProduct({{0, 1}, {4001, 1 << 20}});

void BM_Sandwich(benchmark::State& state) {
  const Measure1D& mu = jacobi(4001);
  const NuDensity nu = NuDensity::same_as(mu);
  for (auto _ : state) benchmark::DoNotOptimize(sobolev_sandwich(mu, nu, 4.0, exec_of(state)).cs_upper);
}
BENCHMARK(BM_Sandwich)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MultiStart(benchmark::State& state) {
  const Measure1D& mu = jacobi(4001);
  OptimizerOptions opt;
  opt.seeds = 8;
  opt.max_iter = 50;
  opt.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(maximize_constant(mu, 4.0, opt).value);
}
BENCHMARK(BM_MultiStart)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Lemma32Suite(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(lemma32_suite(2000, 7, exec_of(state)).worst);
}
BENCHMARK(BM_Lemma32Suite)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Prop42Suite(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(prop42_suite(20, 7, exec_of(state)).worst);
}
BENCHMARK(BM_Prop42Suite)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  fil::configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
