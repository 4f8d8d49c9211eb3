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

#include "nvdetect/optimize.hpp"

#include <algorithm>
#include <vector>

#include "nvdetect/errors.hpp"

namespace nvdetect {

Optimum to_optimum(const Evaluation& e) {
  return Optimum{e.argument, e.p_error, e.outcome.chi, e.coherence.nu(), e.coherence.mu(), e.outcome.regime};
}

Optimum optimize_time(const Scenario& scenario, double t_min, double t_max,
                      const TimeSearchOptions& options) {
  if (!(t_min >= 0.0) || !(t_max > t_min)) throw DomainError("optimize_time: need 0 <= t_min < t_max");
  if (options.grid_points < 3) throw DomainError("optimize_time: grid needs at least 3 points");
  scenario.validate();
  if (scenario.uses_pulse_count()) throw DomainError("optimize_time: scenario is parameterised by pulse count");

  auto error_at = [&](double t) { return evaluate_at_time(scenario, t).p_error; };

  const int n = options.grid_points;
  const double h = (t_max - t_min) / (n - 1);
  std::vector<double> ts(static_cast<std::size_t>(n));
  std::vector<double> fs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ts[static_cast<std::size_t>(i)] = i + 1 == n ? t_max : t_min + i * h;
    fs[static_cast<std::size_t>(i)] = error_at(ts[static_cast<std::size_t>(i)]);
  }
  const auto best_it = std::min_element(fs.begin(), fs.end());
  double best_t = ts[static_cast<std::size_t>(best_it - fs.begin())];
  double best_f = *best_it;
  const double threshold = best_f + options.basin_fraction * std::abs(best_f);

  for (int i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const bool left_ok = i == 0 || fs[u] < fs[u - 1];  // plateaus refined once
    const bool right_ok = i + 1 == n || fs[u] <= fs[u + 1];
    if (!left_ok || !right_ok || fs[u] > threshold) continue;
    const double a = ts[i == 0 ? u : u - 1];
    const double b = ts[i + 1 == n ? u : u + 1];
    const double t = golden_section_minimize(error_at, a, b, options.tolerance);
    const double f = error_at(t);
    if (f < best_f) {
      best_f = f;
      best_t = t;
    }
  }
  return to_optimum(evaluate_at_time(scenario, best_t));
}

Optimum optimize_pulses(const Scenario& scenario, int n_min, int n_max) {
  if (n_min < 2 || n_min % 2 != 0 || n_max % 2 != 0 || n_max < n_min) {
    throw DomainError("optimize_pulses: need even bounds with 2 <= n_min <= n_max");
  }
  scenario.validate();
  if (!scenario.uses_pulse_count()) throw DomainError("optimize_pulses: scenario is parameterised by time");
  std::optional<Evaluation> best;
  for (int n = n_min; n <= n_max; n += 2) {
    Evaluation e = evaluate_at_pulses(scenario, n);
    if (!best || e.p_error < best->p_error) best = std::move(e);
  }
  return to_optimum(*best);
}

}  // namespace nvdetect
