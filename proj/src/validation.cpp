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

#include "nvdetect/validation.hpp"

#include <cmath>
#include <algorithm>
#include <array>
#include <random>

#include "nvdetect/optimize.hpp"
#include "nvdetect/rng.hpp"

namespace nvdetect {

double closed_form_error(const Scenario& scenario, double argument, int copies) {
  const Evaluation e = evaluate(scenario, argument);
  if (copies == 1) return e.p_error;
  ConditionalErrors c = e.outcome.conditionals();
  if (e.outcome.regime == Regime::Measure) c = with_detection_efficiency(c, scenario.eta);
  return multicopy_error(scenario.priors, c, copies);
}

std::vector<ValidationCase> validation_battery(std::uint64_t seed) {
  Engine eng(seed);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); };
  auto even = [&](int lo, int hi) { return 2 * std::uniform_int_distribution<int>(lo / 2, hi / 2)(eng); };

  std::vector<ValidationCase> cases;
  auto add = [&](std::string name, Scenario s, double argument, int copies) {
    const double closed = closed_form_error(s, argument, copies);
    cases.push_back(ValidationCase{std::move(name), std::move(s), argument, copies, closed});
  };

  for (int round = 0; round < 4; ++round) {
    const std::string tag = "#" + std::to_string(round);
    {
      Scenario s;
      s.noise = NoiseModel(uniform(1.0, 4.0), uniform(5.0, 40.0));
      s.field = DcKnown{uniform(5.0, 60.0)};
      s.protocol = FreeEvolution{Dephasing::Exact};
      s.priors = Priors::from_present(uniform(0.3, 0.7));
      s.eta = round % 2 == 0 ? 1.0 : uniform(0.4, 1.0);
      add("dc-known" + tag, s, optimize_time(s, 0.0, 1.0).argument * uniform(0.85, 1.15), 1);
    }
    {
      Scenario s;
      s.noise = NoiseModel(uniform(1.0, 4.0), uniform(5.0, 40.0));
      s.field = DcGaussian{uniform(10.0, 60.0), uniform(0.0, 30.0)};
      s.protocol = FreeEvolution{Dephasing::Exact};
      s.priors = Priors::from_present(uniform(0.3, 0.7));
      s.eta = uniform(0.5, 1.0);
      add("dc-gaussian" + tag, s, optimize_time(s, 0.0, 1.0).argument * uniform(0.85, 1.15), 1);
    }
    {
      Scenario s;
      const double f = std::array{0.5, 1.0, 2.0}[static_cast<std::size_t>(round % 3)];
      s.noise = NoiseModel(3.6, 25.0);
      s.field = AcCosine{uniform(0.5, 2.0), uniform(0.0, 0.5), f, round == 3 ? 0.02 : 0.0};
      s.protocol = Cpmg{};
      s.priors = Priors::from_present(uniform(0.35, 0.65));
      s.eta = uniform(0.6, 1.0);
      const int best = static_cast<int>(optimize_pulses(s, 2, 200).argument);
      add("ac-cpmg" + tag, s, std::max(2, best + even(-10, 10)), 1);
    }
    {
      Scenario s;
      s.noise = NoiseModel(3.6, 25.0);
      s.field = MultiTone{{Tone{uniform(0.5, 2.0), 1.0}, Tone{uniform(0.5, 2.5), 1.5}}};
      s.protocol = NodeLocked{};
      s.priors = Priors::from_present(uniform(0.4, 0.6));
      s.eta = uniform(0.7, 1.0);
      add("waveform" + tag, s, round % 2 == 0 ? optimize_time(s, 0.1, 5.0).argument : uniform(0.5, 5.0), 1);
    }
    {
      Scenario s;
      s.noise = NoiseModel(3.6, 25.0);
      s.field = AcCosine{1.0, 0.0, 1.0};
      s.protocol = Cpmg{};
      s.priors = Priors::from_present(uniform(0.4, 0.6));
      s.eta = round < 2 ? 1.0 : uniform(0.8, 1.0);
      add("multicopy" + tag, s, even(20, 60), 1 + round + (round == 3 ? 2 : 0));
    }
  }
  return cases;
}

std::vector<ValidationOutcome> run_validation_battery(const std::vector<ValidationCase>& cases,
                                                      std::uint64_t shots, std::uint64_t seed,
                                                      unsigned threads, double z_limit) {
  std::vector<ValidationOutcome> out;
  out.reserve(cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const ValidationCase& c = cases[i];
    SimulationOptions opts{shots, batch_seed(seed, 1000 + i), threads};
    const EmpiricalResult r = simulate_multicopy(c.scenario, c.argument, c.copies, opts);
    const double p = c.closed_form;
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
    const double diff = r.error_rate - p;
    const double z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : INFINITY);
    out.push_back(ValidationOutcome{c, r, z, std::abs(z) <= z_limit});
  }
  return out;
}

}  // namespace nvdetect
