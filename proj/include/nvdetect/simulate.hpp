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

#include "nvdetect/scenario.hpp"

namespace nvdetect {

struct SimulationOptions {
  std::uint64_t n_shots = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct EmpiricalResult {
  std::uint64_t n_shots;
  double error_rate;
  /// sqrt(p (1 - p) / n)
  double standard_error;
  std::uint64_t seed;
};

/// Shot-by-shot Monte Carlo of the full protocol at `argument` (T, or N for
/// CPMG): draw the truth from the priors, the field from its prior, an OU
/// noise trajectory, then measure along the optimal angle, register the
/// bright outcome with probability eta and decide "present" on a photon.
///
/// Results are bit-identical for a given seed and shot count regardless of
/// the number of threads.
EmpiricalResult simulate_detection(const Scenario& scenario, double argument,
                                   const SimulationOptions& options);

/// As simulate_detection, but every trial measures m independent copies under
/// the same truth and takes a majority vote; ties are broken by a fair coin.
/// Here n_shots counts trials.
EmpiricalResult simulate_multicopy(const Scenario& scenario, double argument, int m_copies,
                                   const SimulationOptions& options);

}  // namespace nvdetect
