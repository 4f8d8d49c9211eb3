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

#include <ostream>

#include <json.hpp>

#include "nvdetect/cli/commands.hpp"

namespace nvdetect::cli {

/// CSV with header; floats printed with 17 significant digits, a missing chi
/// as an empty field.
void write_csv(std::ostream& out, const Table& table);

/// Rows, optimum row and metadata.
nlohmann::json to_json(const Table& table, const Config& cfg);

void write_simulation_csv(std::ostream& out, const SimulationReport& report);
nlohmann::json to_json(const SimulationReport& report, const Config& cfg);

}  // namespace nvdetect::cli
