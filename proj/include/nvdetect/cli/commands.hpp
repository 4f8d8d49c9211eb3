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

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nvdetect/cli/config.hpp"
#include "nvdetect/optimize.hpp"
#include "nvdetect/simulate.hpp"

namespace nvdetect::cli {

/// One CSV row; columns are emitted in declaration order.
struct OutputRow {
  double value;
  double p_error;
  std::optional<double> chi;
  double nu;
  double mu_abs;
  double mu_arg;
  Regime regime;
};

struct Table {
  std::string command;
  SweepVariable variable;
  std::vector<OutputRow> rows;

  /// Row with the smallest p_error (first on ties).
  const OutputRow& optimum() const;
};

OutputRow make_row(double value, const Evaluation& e);
OutputRow make_row(double value, const Optimum& o);

/// Values of a sweep; integer variables (N, M) must land on integers.
std::vector<double> sweep_values(const SweepSpec& spec);

/// Interrogation point used when a command does not sweep T or N: the
/// configured operating point, else the optimum over the search range.
double base_argument(const Config& cfg);

Table run_dc_sweep(const Config& cfg, unsigned threads = 1);
Table run_ac_sweep(const Config& cfg, unsigned threads = 1);
Table run_waveform(const Config& cfg, unsigned threads = 1);
Table run_multicopy(const Config& cfg, unsigned threads = 1);
Table run_efficiency(const Config& cfg, unsigned threads = 1);
Table run_optimize(const Config& cfg);

struct SimulationReport {
  double argument;
  int copies;
  double closed_form;
  EmpiricalResult empirical;
  double z_score;
};

SimulationReport run_simulation(const Config& cfg, unsigned threads = 1);

/// Oracle battery; writes one PASS/FAIL line per check and returns true when
/// all pass.
bool run_selftest(std::ostream& out, std::uint64_t seed, unsigned threads = 1);

}  // namespace nvdetect::cli
