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

#include <iosfwd>

namespace fil::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInvalidInput = 2;

/// Runs one subcommand: bounds, empirical, gap, decay, perturb, check or
/// report. Human-readable output and CSV go to `out`, diagnostics to `err`.
/// Returns 0 when every assertion passed, 1 when at least one failed, 2 on
/// invalid input.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fil::cli
