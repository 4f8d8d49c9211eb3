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

#include <complex>
#include <optional>

#include "nvdetect/scenario.hpp"

namespace nvdetect {

struct Optimum {
  /// T in us, or N for pulse-count scenarios.
  double argument;
  double p_error;
  std::optional<double> chi;
  double nu;
  std::complex<double> mu;
  Regime regime;
};

Optimum to_optimum(const Evaluation& e);

struct TimeSearchOptions {
  int grid_points = 2000;
  /// Golden-section bracket width at termination, us.
  double tolerance = 1e-9;
  /// Local grid minima within this fraction of the best grid value are refined.
  double basin_fraction = 0.01;
};

/// Global minimisation of the error over T in [t_min, t_max]: uniform grid,
/// then golden-section refinement of every competitive local basin.
Optimum optimize_time(const Scenario& scenario, double t_min, double t_max,
                      const TimeSearchOptions& options = {});

/// Exhaustive scan over even N in [n_min, n_max]; ties go to the smaller N.
Optimum optimize_pulses(const Scenario& scenario, int n_min, int n_max);

/// Golden-section search for a minimum of f on [a, b]. Returns the best
/// abscissa evaluated.
template <typename F>
double golden_section_minimize(F&& f, double a, double b, double tolerance);

}  // namespace nvdetect

#include <cmath>

namespace nvdetect {

template <typename F>
double golden_section_minimize(F&& f, double a, double b, double tolerance) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  double best_x = fc <= fd ? c : d;
  double best_f = std::min(fc, fd);
  while (b - a > tolerance) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      if (fc < best_f) best_f = fc, best_x = c;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      if (fd < best_f) best_f = fd, best_x = d;
    }
  }
  return best_x;
}

}  // namespace nvdetect
