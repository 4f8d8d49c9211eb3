// Copyright 2026 The nvdetect Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "nvdetect/scenario.hpp"

namespace nvdetect::cli {

/// Malformed or inconsistent configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct SearchRange {
  double t_min = 0.0;
  double t_max = 3.0;
  int n_min = 2;
  int n_max = 400;
};

enum class SweepVariable { T, N, M, Eta, SigmaB };

std::string to_string(SweepVariable v);

struct SweepSpec {
  SweepVariable variable;
  double from;
  double to;
  std::optional<double> step;
  std::optional<int> count;
};

struct SimulationSpec {
  std::uint64_t shots = 100000;
  int copies = 1;
};

struct Config {
  Scenario scenario;
  /// Fixed T (or N for CPMG); when absent commands optimise over `search`.
  std::optional<double> operating_point;
  SearchRange search;
  std::optional<SweepSpec> sweep;
  SimulationSpec simulation;
  std::uint64_t seed = 1;
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw
/// ConfigError.
Config parse_config(const nlohmann::json& doc);
Config load_config(const std::filesystem::path& path);

}  // namespace nvdetect::cli
