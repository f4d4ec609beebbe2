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

#include "fil/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "fil/grid.hpp"

namespace fil {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Drops a trailing comment that is not inside a string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

double parse_toml_number(const std::string& text, std::size_t line) {
  std::string t;
  for (char c : text) {
    if (c != '_') t += c;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size() || !std::isfinite(v)) {
    throw InputError(fmt::format("config line {}: '{}' is not a number", line, text));
  }
  return v;
}

TomlValue parse_value(const std::string& raw, std::size_t line) {
  const std::string v = trim(raw);
  if (v.empty()) throw InputError(fmt::format("config line {}: missing value", line));
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') {
      throw InputError(fmt::format("config line {}: unterminated string", line));
    }
    std::string out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i] == '\\' && i + 2 < v.size()) {
        const char n = v[++i];
        if (n == 'n') out += '\n';
        else if (n == 't') out += '\t';
        else if (n == '"' || n == '\\') out += n;
        else throw InputError(fmt::format("config line {}: unsupported escape", line));
      } else {
        out += v[i];
      }
    }
    return out;
  }
  if (v == "true") return true;
  if (v == "false") return false;
  if (v.front() == '[') {
    if (v.back() != ']') throw InputError(fmt::format("config line {}: unterminated array", line));
    std::vector<double> xs;
    std::stringstream ss(v.substr(1, v.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      xs.push_back(parse_toml_number(item, line));
    }
    return xs;
  }
  if (v.front() == '{') throw InputError(fmt::format("config line {}: inline tables are not supported", line));
  return parse_toml_number(v, line);
}

const char* type_name(const TomlValue& v) {
  switch (v.index()) {
    case 0: return "string";
    case 1: return "number";
    case 2: return "boolean";
    default: return "array";
  }
}

}  // namespace

void RunConfig::validate() const {
  if (grid_n < 11) throw InputError("grid_n must be at least 11");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("dt must be positive");
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw InputError("t_max must be >= 0");
  if (!(t_step > 0.0) || !std::isfinite(t_step)) throw InputError("t_step must be positive");
  if (seeds < 1) throw InputError("seeds must be at least 1");
  if (max_iter < 1) throw InputError("max_iter must be at least 1");
  if (p_list.empty()) throw InputError("at least one p is required");
  for (double p : p_list) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InputError(fmt::format("p = {} must be >= 0", p));
  }
  if (c_s && !(*c_s > 0.0)) throw InputError("c_s must be positive");
}

std::map<std::string, TomlValue> parse_toml_subset(const std::string& text) {
  std::map<std::string, TomlValue> out;
  std::stringstream ss(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(ss, line)) {
    ++number;
    if (number == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line = line.substr(3);
    const std::string t = trim(strip_comment(line));
    if (t.empty()) continue;
    if (t.front() == '[') throw InputError(fmt::format("config line {}: tables are not supported", number));
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw InputError(fmt::format("config line {}: expected key = value", number));
    const std::string key = trim(t.substr(0, eq));
    if (key.empty() || key.find_first_of(". \t\"") != std::string::npos) {
      throw InputError(fmt::format("config line {}: unsupported key '{}'", number, key));
    }
    if (out.count(key)) throw InputError(fmt::format("config line {}: duplicate key '{}'", number, key));
    out.emplace(key, parse_value(t.substr(eq + 1), number));
  }
  return out;
}

void apply_config(RunConfig& cfg, const std::map<std::string, TomlValue>& values) {
  for (const auto& [key, value] : values) {
    auto want_string = [&]() -> const std::string& {
      if (const auto* s = std::get_if<std::string>(&value)) return *s;
      throw InputError(fmt::format("config key '{}' expects a string, got {}", key, type_name(value)));
    };
    auto want_number = [&]() {
      if (const auto* d = std::get_if<double>(&value)) return *d;
      throw InputError(fmt::format("config key '{}' expects a number, got {}", key, type_name(value)));
    };
    auto want_count = [&]() {
      const double d = want_number();
      if (d < 0.0 || d != std::floor(d) || d > 9.007199254740992e15) {
        throw InputError(fmt::format("config key '{}' expects a nonnegative integer", key));
      }
      return d;
    };
    if (key == "measure" || key == "measure_spec") cfg.measure_spec = want_string();
    else if (key == "nu" || key == "nu_spec") cfg.nu_spec = want_string();
    else if (key == "p" || key == "p_list") {
      if (const auto* xs = std::get_if<std::vector<double>>(&value)) cfg.p_list = *xs;
      else cfg.p_list = {want_number()};
    }
    else if (key == "grid_n") cfg.grid_n = static_cast<std::size_t>(want_count());
    else if (key == "dt") cfg.dt = want_number();
    else if (key == "t_max") cfg.t_max = want_number();
    else if (key == "t_step") cfg.t_step = want_number();
    else if (key == "seeds") cfg.seeds = static_cast<int>(want_count());
    else if (key == "rng_seed") cfg.rng_seed = static_cast<std::uint64_t>(want_count());
    else if (key == "max_iter") cfg.max_iter = static_cast<int>(want_count());
    else if (key == "output" || key == "output_path") cfg.output_path = want_string();
    else if (key == "curve" || key == "curve_path") cfg.curve_path = want_string();
    else if (key == "f0") cfg.f0 = want_string();
    else if (key == "u") cfg.u = want_string();
    else if (key == "cs" || key == "c_s") cfg.c_s = want_number();
    else if (key == "instances") cfg.instances = static_cast<std::size_t>(want_count());
    else if (key == "deterministic") {
      if (const auto* b = std::get_if<bool>(&value)) cfg.deterministic = *b;
      else throw InputError("config key 'deterministic' expects a boolean");
    }
    else throw InputError(fmt::format("unknown config key '{}'", key));
  }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config(cfg, parse_toml_subset(ss.str()));
}

}  // namespace fil
