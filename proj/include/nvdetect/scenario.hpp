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
#include <variant>

#include "nvdetect/discrim.hpp"
#include "nvdetect/field.hpp"
#include "nvdetect/noise.hpp"

namespace nvdetect {

enum class Dephasing {
  /// exp(-kappa^2 T^2 / 2), valid for T << tau_c.
  QuasiStatic,
  /// exp(-kappa^2 W(T)) from the exact filter integral.
  Exact,
};

struct FreeEvolution {
  Dephasing dephasing = Dephasing::QuasiStatic;
};

/// CPMG train. Without an explicit tau the pulses sit on the cosine's nodes,
/// tau = 1 / (2f).
struct Cpmg {
  std::optional<double> tau;
};

/// Pulses on the zero crossings of a known waveform.
struct NodeLocked {};

using Protocol = std::variant<FreeEvolution, Cpmg, NodeLocked>;

struct Scenario {
  NoiseModel noise{3.6, 25.0};
  FieldHypothesis field = DcKnown{0.0};
  Priors priors = Priors::equal();
  Protocol protocol = FreeEvolution{};
  double eta = 1.0;
  Gyromagnetic gamma{};

  /// Throws DomainError for inconsistent combinations: free evolution needs a
  /// DC field, CPMG an AC cosine, node-locked a multi-tone waveform.
  void validate() const;
  bool uses_pulse_count() const { return std::holds_alternative<Cpmg>(protocol); }
};

/// Interrogation at a fixed time T (free evolution, node-locked) or a fixed
/// pulse count N (CPMG).
struct Evaluation {
  double argument;
  PulseSequence sequence;
  CoherencePair coherence;
  DiscriminationOutcome outcome;
  /// Error including detection efficiency.
  double p_error;
};

double cpmg_spacing(const Scenario& scenario);

Evaluation evaluate_at_time(const Scenario& scenario, double total_time);
Evaluation evaluate_at_pulses(const Scenario& scenario, int n_pulses);

/// Dispatches on the protocol: `argument` is N for CPMG (must be integral)
/// and T otherwise.
Evaluation evaluate(const Scenario& scenario, double argument);

/// Error once the measurement is read out with efficiency eta. Outside the
/// Measure regime no measurement is made and eta is irrelevant.
double effective_error(const Priors& priors, const CoherencePair& coh,
                       const DiscriminationOutcome& outcome, double eta);

}  // namespace nvdetect
