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

#include "nvdetect/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "nvdetect/errors.hpp"
#include "nvdetect/rng.hpp"
#include "nvdetect/series.hpp"

namespace nvdetect {

namespace {

constexpr std::uint64_t kBatchSize = 8192;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Exact update of (x, int x dt) for the OU process over one constant-sign
// segment: x_h given x_0, then the integral given both end points.
struct Segment {
  double sign;
  double decay;
  double innovation;
  double from_start;
  double from_bridge;
  double bridge_sd;
};

double tanh_half_over(double y) {
  if (y < 1e-4) return 0.5 - y * y / 24.0;
  return std::tanh(0.5 * y) / y;
}

struct ShotModel {
  std::vector<Segment> segments;
  double kappa = 0.0;
  double p1 = 0.5;
  double eta = 1.0;
  Regime regime = Regime::Measure;
  double chi = 0.0;

  // Signal phase = unit_phase * amplitude, amplitude ~ N(amp_mean, amp_sd^2).
  double unit_phase = 0.0;
  double amp_mean = 0.0;
  double amp_sd = 0.0;
  // Random frequency (AC cosine with sigma_f > 0) requires recomputing unit_phase.
  const PulseSequence* sequence = nullptr;
  double freq_mean = 0.0;
  double freq_sd = 0.0;
  double gamma = 0.028;

  double noise_phase(Engine& eng, std::normal_distribution<double>& normal) const {
    if (kappa == 0.0) return 0.0;
    double x = kappa * normal(eng);
    double phase = 0.0;
    for (const Segment& s : segments) {
      const double x_next = s.decay * x + s.innovation * normal(eng);
      const double integral =
          x * s.from_start + (x_next - s.decay * x) * s.from_bridge + s.bridge_sd * normal(eng);
      phase += s.sign * integral;
      x = x_next;
    }
    return phase;
  }

  double signal_phase(Engine& eng, std::normal_distribution<double>& normal) const {
    double unit = unit_phase;
    if (freq_sd > 0.0) {
      const double f = freq_mean + freq_sd * normal(eng);
      unit = kTwoPi * gamma * switched_cosine_integral(*sequence, f);
    }
    const double amplitude = amp_sd > 0.0 ? amp_mean + amp_sd * normal(eng) : amp_mean;
    return unit * amplitude;
  }

  // One measured copy; returns true for "present".
  bool decide(bool present, Engine& eng, std::normal_distribution<double>& normal,
              std::uniform_real_distribution<double>& uniform) const {
    switch (regime) {
      case Regime::AlwaysPresent: return true;
      case Regime::AlwaysAbsent:
      case Regime::Indifferent: return false;
      case Regime::Measure: break;
    }
    double phase = noise_phase(eng, normal);
    if (present) phase += signal_phase(eng, normal);
    const double p_bright = 0.5 * (1.0 - std::cos(chi - phase));
    const bool bright = uniform(eng) < p_bright;
    if (!bright) return false;
    return eta >= 1.0 || uniform(eng) < eta;
  }
};

ShotModel build_model(const Scenario& scenario, const Evaluation& eval) {
  ShotModel m;
  m.kappa = scenario.noise.kappa();
  m.p1 = scenario.priors.p1();
  m.eta = scenario.eta;
  m.regime = eval.outcome.regime;
  m.chi = eval.outcome.chi.value_or(0.0);
  m.gamma = scenario.gamma.value();

  const SwitchingProfile prof = eval.sequence.switching_profile();
  const double rate = scenario.noise.rate();
  for (std::size_t i = 0; i < prof.num_segments(); ++i) {
    const double h = prof.segment_length(i);
    const double y = rate * h;
    Segment s{};
    s.sign = prof.signs[i];
    s.decay = std::exp(-y);
    s.innovation = m.kappa * std::sqrt(-std::expm1(-2.0 * y));
    s.from_start = h * detail::phi1(y);
    s.from_bridge = h * tanh_half_over(y);
    s.bridge_sd = m.kappa * h * std::sqrt(std::max(0.0, detail::ou_bridge_integral_variance(y)));
    m.segments.push_back(s);
  }

  double signed_time = 0.0;
  for (std::size_t i = 0; i < prof.num_segments(); ++i) signed_time += prof.signs[i] * prof.segment_length(i);
  const double scale = kTwoPi * m.gamma;
  if (const auto* f = std::get_if<DcKnown>(&scenario.field)) {
    m.unit_phase = scale * signed_time;
    m.amp_mean = f->b;
  } else if (const auto* f = std::get_if<DcGaussian>(&scenario.field)) {
    m.unit_phase = scale * signed_time;
    m.amp_mean = f->b0;
    m.amp_sd = f->sigma_b;
  } else if (const auto* f = std::get_if<AcCosine>(&scenario.field)) {
    m.unit_phase = scale * switched_cosine_integral(eval.sequence, f->f);
    m.amp_mean = f->b0;
    m.amp_sd = f->sigma_b;
    m.freq_mean = f->f;
    m.freq_sd = f->sigma_f;
  } else {
    const auto& wave = std::get<MultiTone>(scenario.field);
    m.unit_phase = scale * switched_field_integral(wave, eval.sequence);
    m.amp_mean = 1.0;
  }
  return m;
}

template <typename Trial>
EmpiricalResult run_batches(const SimulationOptions& options, Trial trial) {
  const std::uint64_t n = options.n_shots;
  const std::uint64_t n_batches = (n + kBatchSize - 1) / kBatchSize;
  std::vector<std::uint64_t> errors(n_batches, 0);
  std::atomic<std::uint64_t> next{0};

  auto worker = [&] {
    for (std::uint64_t b = next++; b < n_batches; b = next++) {
      Engine eng(batch_seed(options.seed, b));
      const std::uint64_t count = std::min(kBatchSize, n - b * kBatchSize);
      std::uint64_t wrong = 0;
      for (std::uint64_t k = 0; k < count; ++k) wrong += trial(eng) ? 1 : 0;
      errors[b] = wrong;
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n_batches)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::uint64_t total = 0;
  for (auto e : errors) total += e;
  const double p = static_cast<double>(total) / static_cast<double>(n);
  return EmpiricalResult{n, p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), options.seed};
}

}  // namespace

EmpiricalResult simulate_detection(const Scenario& scenario, double argument,
                                   const SimulationOptions& options) {
  return simulate_multicopy(scenario, argument, 1, options);
}

EmpiricalResult simulate_multicopy(const Scenario& scenario, double argument, int m_copies,
                                   const SimulationOptions& options) {
  if (options.n_shots == 0) throw DomainError("simulate: need at least one shot");
  if (m_copies < 1) throw DomainError("simulate: need at least one copy");
  const Evaluation eval = evaluate(scenario, argument);
  ShotModel model = build_model(scenario, eval);
  model.sequence = &eval.sequence;

  return run_batches(options, [&](Engine& eng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const bool present = uniform(eng) < model.p1;
    int votes_present = 0;
    for (int c = 0; c < m_copies; ++c) votes_present += model.decide(present, eng, normal, uniform) ? 1 : 0;
    const int votes_absent = m_copies - votes_present;
    bool decision;
    if (votes_present != votes_absent) decision = votes_present > votes_absent;
    else decision = uniform(eng) < 0.5;
    return decision != present;
  });
}

}  // namespace nvdetect
