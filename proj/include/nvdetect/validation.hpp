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
#include <string>
#include <vector>

#include "nvdetect/scenario.hpp"
#include "nvdetect/simulate.hpp"

namespace nvdetect {

/// Closed-form error of the protocol at `argument` with `copies` majority-voted
/// copies, including detection efficiency.
double closed_form_error(const Scenario& scenario, double argument, int copies);

struct ValidationCase {
  std::string name;
  Scenario scenario;
  double argument;
  int copies;
  double closed_form;
};

struct ValidationOutcome {
  ValidationCase validation_case;
  EmpiricalResult empirical;
  /// (empirical - closed form) / sqrt(p (1 - p) / n) with p the closed form.
  double z_score;
  bool passed;
};

/// 20 randomised scenarios covering DC (known and Gaussian), CPMG, node-locked
/// waveforms, unequal priors, eta < 1 and multi-copy voting.
std::vector<ValidationCase> validation_battery(std::uint64_t seed = 20240601);

/// Simulates every case with its own sub-seed and compares to the closed form
/// at `z_limit` standard errors.
std::vector<ValidationOutcome> run_validation_battery(const std::vector<ValidationCase>& cases,
                                                      std::uint64_t shots, std::uint64_t seed,
                                                      unsigned threads = 1, double z_limit = 3.0);

}  // namespace nvdetect
