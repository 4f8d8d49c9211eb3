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

#include "nvdetect/scenario.hpp"

#include <cmath>

#include "nvdetect/errors.hpp"

namespace nvdetect {

void Scenario::validate() const {
  nvdetect::validate(field);
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("scenario: eta must lie in [0, 1]");
  const bool dc = std::holds_alternative<DcKnown>(field) || std::holds_alternative<DcGaussian>(field);
  if (std::holds_alternative<FreeEvolution>(protocol) && !dc) {
    throw DomainError("scenario: free evolution requires a DC field");
  }
  if (const auto* cpmg = std::get_if<Cpmg>(&protocol)) {
    if (!std::holds_alternative<AcCosine>(field)) throw DomainError("scenario: CPMG requires an AC cosine field");
    if (cpmg->tau && !(*cpmg->tau > 0.0)) throw DomainError("scenario: CPMG tau must be positive");
  }
  if (std::holds_alternative<NodeLocked>(protocol) && !std::holds_alternative<MultiTone>(field)) {
    throw DomainError("scenario: node-locked pulses require a multi-tone field");
  }
}

double cpmg_spacing(const Scenario& scenario) {
  const auto& cpmg = std::get<Cpmg>(scenario.protocol);
  if (cpmg.tau) return *cpmg.tau;
  return 0.5 / std::get<AcCosine>(scenario.field).f;
}

double effective_error(const Priors& priors, const CoherencePair& coh,
                       const DiscriminationOutcome& outcome, double eta) {
  if (outcome.regime != Regime::Measure) return outcome.p_error;
  return inefficient_error(priors, coh, *outcome.chi, eta);
}

namespace {

Evaluation finish(const Scenario& s, double argument, PulseSequence seq, double nu, Complex mu) {
  CoherencePair coh(nu, mu);
  DiscriminationOutcome outcome = discriminate(s.priors, coh);
  const double pe = effective_error(s.priors, coh, outcome, s.eta);
  return Evaluation{argument, std::move(seq), coh, outcome, pe};
}

}  // namespace

Evaluation evaluate_at_time(const Scenario& s, double total_time) {
  s.validate();
  if (!(total_time >= 0.0)) throw DomainError("evaluate_at_time: time must be non-negative");
  if (const auto* free = std::get_if<FreeEvolution>(&s.protocol)) {
    PulseSequence seq = PulseSequence::free_evolution(total_time);
    const double nu = free->dephasing == Dephasing::QuasiStatic
                          ? nu_free_quasistatic(s.noise, total_time)
                          : nu_from_w(s.noise, w_numeric(seq, s.noise));
    Complex mu;
    if (const auto* known = std::get_if<DcKnown>(&s.field)) {
      mu = mu_dc_known(known->b, s.gamma, total_time);
    } else {
      const auto& g = std::get<DcGaussian>(s.field);
      mu = mu_dc_gaussian(g.b0, g.sigma_b, s.gamma, total_time);
    }
    return finish(s, total_time, std::move(seq), nu, mu);
  }
  if (std::holds_alternative<NodeLocked>(s.protocol)) {
    const auto& wave = std::get<MultiTone>(s.field);
    if (wave.amplitude_bound() == 0.0) {
      // Nothing to lock onto; a zero field leaves the state untouched.
      PulseSequence seq = PulseSequence::free_evolution(total_time);
      const double nu = nu_from_w(s.noise, w_numeric(seq, s.noise));
      return finish(s, total_time, std::move(seq), nu, Complex(1.0, 0.0));
    }
    PulseSequence seq = node_locked_sequence(wave, total_time);
    const double nu = nu_from_w(s.noise, w_numeric(seq, s.noise));
    const Complex mu = mu_waveform_rectified(wave, seq, s.gamma);
    return finish(s, total_time, std::move(seq), nu, mu);
  }
  throw DomainError("evaluate_at_time: CPMG scenarios are parameterised by pulse count");
}

Evaluation evaluate_at_pulses(const Scenario& s, int n_pulses) {
  s.validate();
  if (!s.uses_pulse_count()) throw DomainError("evaluate_at_pulses: scenario is parameterised by time");
  const auto& ac = std::get<AcCosine>(s.field);
  const double tau = cpmg_spacing(s);
  PulseSequence seq = cpmg_sequence(n_pulses, tau);
  const double nu = nu_from_w(s.noise, w_cpmg_analytic(n_pulses, tau, s.noise));
  const bool on_nodes = std::abs(tau - 0.5 / ac.f) <= 1e-12 * tau;
  const Complex mu = on_nodes && ac.sigma_f == 0.0
                         ? mu_ac_cpmg(ac.b0, ac.sigma_b, s.gamma, ac.f, n_pulses)
                         : mu_ac_marginal(ac, seq, s.gamma);
  return finish(s, n_pulses, std::move(seq), nu, mu);
}

Evaluation evaluate(const Scenario& s, double argument) {
  if (!s.uses_pulse_count()) return evaluate_at_time(s, argument);
  if (argument != std::round(argument)) throw DomainError("evaluate: pulse count must be an integer");
  return evaluate_at_pulses(s, static_cast<int>(argument));
}

}  // namespace nvdetect
