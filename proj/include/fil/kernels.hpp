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

// Data-parallel kernels. Every kernel has a serial reference path selected by
// Exec::serial; the two paths must agree bit for bit, which the kernel tests
// check. No kernel performs a floating-point reduction across threads, so
// results never depend on the schedule.

#include <cmath>
#include <cstddef>
#include <span>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fil {

enum class Exec { serial, parallel };

/// Applies FIL_THREADS (if set to a positive integer) to the OpenMP runtime.
/// Returns the worker count in effect.
int configure_threads_from_env();

/// Runs fn(i) for i in [0, n). Each index must write only its own outputs.
template <class Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
  const auto count = static_cast<long long>(n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
  } else {
    for (long long i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
  }
}

/// tail * [(1 + K/tail)^((p-2)/p) - 1], evaluated with expm1/log1p. For
/// tail below 1e-300 the asymptotic K^((p-2)/p) * tail^(2/p) is used.
inline double hardy_bracket(double tail, double K, double p) {
  const double e = (p - 2.0) / p;
  if (tail <= 0.0) return 0.0;
  if (tail < 1e-300) return std::pow(K, e) * std::pow(tail, 2.0 / p);
  return tail * std::expm1(e * std::log1p(K / tail));
}

/// out[i] = hardy_bracket(tail[i], K, p) * resistance[i].
void hardy_profile(std::span<const double> tail, std::span<const double> resistance, double K,
                   double p, std::span<double> out, Exec exec);

}  // namespace fil
