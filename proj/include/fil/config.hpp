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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fil {

/// Everything that determines a run. Command-line flags override values read
/// from a config file, which override these defaults.
struct RunConfig {
  std::string measure_spec = "uniform";
  std::string nu_spec = "same-as-mu";
  std::vector<double> p_list = {4.0};
  std::size_t grid_n = 4001;
  double dt = 1e-3;
  double t_max = 1.0;
  double t_step = 0.05;
  int seeds = 16;
  std::uint64_t rng_seed = 12345;
  int max_iter = 500;
  std::string output_path;
  std::string curve_path;
  std::string f0 = "1+0.5*sin(x)";
  std::string u = "0";
  std::optional<double> c_s;
  std::size_t instances = 0;  ///< 0 selects the suite defaults
  bool deterministic = false;

  /// Throws InputError unless grid_n >= 11, dt > 0, t_max >= 0, t_step > 0,
  /// seeds >= 1, max_iter >= 1 and every p >= 0.
  void validate() const;
};

/// Values of the TOML subset read from config files: strings, numbers,
/// booleans and flat arrays of numbers.
using TomlValue = std::variant<std::string, double, bool, std::vector<double>>;

/// Parses `key = value` lines with `#` comments. Tables, inline tables,
/// dotted keys and multi-line values are rejected with InputError.
std::map<std::string, TomlValue> parse_toml_subset(const std::string& text);

/// Applies a parsed file to `cfg`. Unknown keys and mistyped values raise
/// InputError.
void apply_config(RunConfig& cfg, const std::map<std::string, TomlValue>& values);

/// Reads and applies a config file.
void load_config_file(RunConfig& cfg, const std::string& path);

}  // namespace fil
