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

#include "nvdetect/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "nvdetect/errors.hpp"
#include "nvdetect/rng.hpp"
#include "nvdetect/series.hpp"

namespace nvdetect {

NoiseModel::NoiseModel(double kappa, double tau_c) : kappa_(kappa), tau_c_(tau_c) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw DomainError("noise: kappa must be a finite non-negative number");
  }
  if (!(tau_c > 0.0) || !std::isfinite(tau_c)) {
    throw DomainError("noise: tau_c must be positive and finite");
  }
}

int SwitchingProfile::sign_at(double t) const {
  const auto it = std::upper_bound(breakpoints.begin() + 1, breakpoints.end() - 1, t);
  return signs[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

PulseSequence::PulseSequence(double total_time, std::vector<double> pulse_times)
    : total_time_(total_time), pulse_times_(std::move(pulse_times)) {
  if (!(total_time >= 0.0) || !std::isfinite(total_time)) {
    throw DomainError("pulse sequence: total time must be finite and non-negative");
  }
  double prev = 0.0;
  for (double t : pulse_times_) {
    if (!(t > prev) || !(t < total_time_)) {
      throw DomainError("pulse sequence: pulse times must be strictly increasing inside (0, T)");
    }
    prev = t;
  }
}

SwitchingProfile PulseSequence::switching_profile() const {
  SwitchingProfile profile;
  profile.breakpoints.reserve(pulse_times_.size() + 2);
  profile.breakpoints.push_back(0.0);
  profile.breakpoints.insert(profile.breakpoints.end(), pulse_times_.begin(), pulse_times_.end());
  profile.breakpoints.push_back(total_time_);
  profile.signs.resize(pulse_times_.size() + 1);
  int sign = 1;
  for (auto& s : profile.signs) {
    s = sign;
    sign = -sign;
  }
  return profile;
}

PiecewiseLinear::PiecewiseLinear(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.empty() || knots_.size() != values_.size()) {
    throw DomainError("piecewise-linear: knots and values must be nonempty and equally sized");
  }
}

double PiecewiseLinear::operator()(double s) const {
  if (s <= knots_.front()) return values_.front();
  if (s >= knots_.back()) return values_.back();
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
  const std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
  const std::size_t lo = hi - 1;
  const double h = knots_[hi] - knots_[lo];
  const double u = (s - knots_[lo]) / h;
  return values_[lo] + u * (values_[hi] - values_[lo]);
}

double nu_free_quasistatic(const NoiseModel& noise, double t) {
  if (!(t >= 0.0)) throw DomainError("nu_free_quasistatic: time must be non-negative");
  const double k = noise.kappa();
  return std::exp(-0.5 * k * k * t * t);
}

namespace {

// Exact p(s) from segment overlaps. Only segments j >= i can pair for s >= 0.
double correlation_at(const SwitchingProfile& prof, double s) {
  const auto& b = prof.breakpoints;
  const std::size_t n = prof.num_segments();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = b[i] + s;
    const double hi = b[i + 1] + s;
    auto it = std::upper_bound(b.begin(), b.end(), lo);
    std::size_t j = it == b.begin() ? 0 : static_cast<std::size_t>(it - b.begin()) - 1;
    for (; j < n && b[j] < hi; ++j) {
      const double overlap = std::min(hi, b[j + 1]) - std::max(lo, b[j]);
      if (overlap > 0.0) total += prof.signs[i] * prof.signs[j] * overlap;
    }
  }
  return total;
}

}  // namespace

PiecewiseLinear autocorrelation(const PulseSequence& seq) {
  const double T = seq.total_time();
  const SwitchingProfile prof = seq.switching_profile();
  const auto& b = prof.breakpoints;

  std::vector<double> knots;
  knots.reserve(b.size() * (b.size() + 1) / 2);
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = i; j < b.size(); ++j) knots.push_back(b[j] - b[i]);
  }
  knots.push_back(T);
  std::sort(knots.begin(), knots.end());
  // Differences of equal spacings come out a few ulps apart; merge them.
  const double merge_tol = 1e-12 * std::max(T, 1e-300);
  std::vector<double> merged;
  merged.reserve(knots.size());
  for (double k : knots) {
    if (merged.empty() || k - merged.back() > merge_tol) merged.push_back(k);
  }
  merged.front() = 0.0;
  if (merged.back() != T) {
    if (T - merged.back() <= merge_tol) merged.back() = T;
    else merged.push_back(T);
  }

  std::vector<double> values(merged.size());
  for (std::size_t k = 0; k < merged.size(); ++k) values[k] = correlation_at(prof, merged[k]);
  values.front() = T;
  values.back() = 0.0;
  return PiecewiseLinear(std::move(merged), std::move(values));
}

double w_numeric(const PulseSequence& seq, double rate) {
  if (!(rate >= 0.0)) throw DomainError("w_numeric: rate must be non-negative");
  const PiecewiseLinear p = autocorrelation(seq);
  const auto s = p.knots();
  const auto v = p.values();
  double w = 0.0;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const double h = s[k + 1] - s[k];
    const double x = rate * h;
    // int_0^h e^{-R(s_k+u)} (v_k + (v_{k+1}-v_k) u/h) du
    w += std::exp(-rate * s[k]) * h *
         (v[k] * detail::phi1(x) + (v[k + 1] - v[k]) * detail::phi2(x));
  }
  return w;
}

double w_numeric(const PulseSequence& seq, const NoiseModel& noise) {
  return w_numeric(seq, noise.rate());
}

double w_cpmg_analytic(int n_pulses, double tau, double rate) {
  if (n_pulses < 2 || n_pulses % 2 != 0) {
    throw DomainError("w_cpmg_analytic: pulse count must be even and >= 2, got " +
                      std::to_string(n_pulses));
  }
  if (!(tau > 0.0)) throw DomainError("w_cpmg_analytic: tau must be positive");
  if (!(rate > 0.0)) throw DomainError("w_cpmg_analytic: rate must be positive");

  using detail::exp_remainder2;
  using detail::exp_remainder3;
  const double n = n_pulses;
  const double d = rate * tau;

  // 1 - e^{-2d} and 1 - e^{-Nd}
  const double one_minus_e2 = -std::expm1(-2.0 * d);
  const double one_minus_en = -std::expm1(-n * d);
  const double p_n = one_minus_en / one_minus_e2;

  // 0.5N - (0.5N + 1)e^{-2d} + e^{-(N+2)d}, with the O(1) and O(d) parts cancelled.
  const double gamma_num = n * d * one_minus_e2 - 0.5 * n * exp_remainder2(2.0 * d) +
                           std::exp(-2.0 * d) * exp_remainder2(n * d);
  const double gamma_n = gamma_num / (one_minus_e2 * one_minus_e2);

  // The polynomial parts through second order of both brackets vanish.
  const double q11 = (4.0 * (exp_remainder3(0.5 * d) + exp_remainder3(d) -
                             exp_remainder3(1.5 * d)) +
                      exp_remainder3(2.0 * d)) /
                     (rate * rate);
  const double q12 = (-4.0 * (exp_remainder3(0.5 * d) - exp_remainder3(d) -
                              exp_remainder3(1.5 * d)) -
                      5.0 * exp_remainder3(2.0 * d) - 2.0 * d * exp_remainder2(2.0 * d)) /
                     (rate * rate);

  return gamma_n * (q11 + q12) - p_n * q12;
}

double w_cpmg_analytic(int n_pulses, double tau, const NoiseModel& noise) {
  return w_cpmg_analytic(n_pulses, tau, noise.rate());
}

double nu_from_w(const NoiseModel& noise, double w) {
  const double k = noise.kappa();
  return std::exp(-k * k * w);
}

double default_mc_step(const PulseSequence& seq, const NoiseModel& noise) {
  const SwitchingProfile prof = seq.switching_profile();
  double shortest = seq.total_time();
  for (std::size_t i = 0; i < prof.num_segments(); ++i) {
    shortest = std::min(shortest, prof.segment_length(i));
  }
  double dt = noise.tau_c() / 500.0;
  if (shortest > 0.0) dt = std::min(dt, shortest / 50.0);
  return dt;
}

McEstimate mc_nu_estimate(const PulseSequence& seq, const NoiseModel& noise,
                          const McOptions& options) {
  if (options.n_traj == 0) throw DomainError("mc_nu_estimate: n_traj must be >= 1");
  if (options.dt < 0.0) throw DomainError("mc_nu_estimate: dt must be positive");
  const double T = seq.total_time();
  const double dt_req = options.dt > 0.0 ? options.dt : default_mc_step(seq, noise);
  const auto n_steps = static_cast<std::size_t>(std::max(1.0, std::round(T / dt_req)));
  const double dt = T / static_cast<double>(n_steps);

  // Sign per grid step with pulses snapped to the nearest grid point.
  std::vector<double> xi(n_steps);
  {
    std::size_t next = 0;
    const auto pulses = seq.pulse_times();
    double sign = 1.0;
    for (std::size_t k = 0; k < n_steps; ++k) {
      while (next < pulses.size() &&
             static_cast<std::size_t>(std::llround(pulses[next] / dt)) <= k) {
        sign = -sign;
        ++next;
      }
      xi[k] = sign;
    }
  }

  const double kappa = noise.kappa();
  const double a = std::exp(-dt / noise.tau_c());
  const double innovation = kappa * std::sqrt(-std::expm1(-2.0 * dt / noise.tau_c()));

  Engine engine(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::uint64_t n = 0; n < options.n_traj; ++n) {
    double x = kappa * normal(engine);
    double phase = 0.0;
    for (std::size_t k = 0; k < n_steps; ++k) {
      phase += xi[k] * x;
      x = a * x + innovation * normal(engine);
    }
    const double c = std::cos(phase * dt);
    sum += c;
    sum_sq += c * c;
  }
  const double count = static_cast<double>(options.n_traj);
  const double mean = sum / count;
  double se = 0.0;
  if (options.n_traj > 1) {
    const double var = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0));
    se = std::sqrt(var / count);
  }
  return {mean, se};
}

}  // namespace nvdetect
