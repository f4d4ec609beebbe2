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

#include "fil/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace fil {

int configure_threads_from_env() {
  const char* env = std::getenv("FIL_THREADS");
#ifdef _OPENMP
  if (env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) omp_set_num_threads(static_cast<int>(v));
  }
  return omp_get_max_threads();
#else
  (void)env;
  return 1;
#endif
}

void hardy_profile(std::span<const double> tail, std::span<const double> resistance, double K,
                   double p, std::span<double> out, Exec exec) {
  if (tail.size() != resistance.size() || tail.size() != out.size()) {
    throw std::invalid_argument("hardy_profile: length mismatch");
  }
  const auto n = static_cast<long long>(tail.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) out[i] = hardy_bracket(tail[i], K, p) * resistance[i];
  } else {
    for (long long i = 0; i < n; ++i) out[i] = hardy_bracket(tail[i], K, p) * resistance[i];
  }
}

}  // namespace fil
