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
#include <span>
#include <vector>

namespace nvdetect {

/// Stationary Gaussian Ornstein-Uhlenbeck dephasing noise with correlation
/// <B(0)B(t)> = kappa^2 exp(-|t| / tau_c).
///
/// Units: kappa in rad/us, tau_c in us.
class NoiseModel {
 public:
  NoiseModel(double kappa, double tau_c);

  double kappa() const { return kappa_; }
  double tau_c() const { return tau_c_; }
  /// Decay rate R = 1 / tau_c, in 1/us.
  double rate() const { return 1.0 / tau_c_; }

 private:
  double kappa_;
  double tau_c_;
};

/// Piecewise +/-1 switching function xi(t) on [0, T], starting at +1 and
/// flipping sign at every pulse.
struct SwitchingProfile {
  /// 0 = b_0 < b_1 < ... < b_n = T.
  std::vector<double> breakpoints;
  /// Sign on [b_i, b_{i+1}]; signs.size() == breakpoints.size() - 1.
  std::vector<int> signs;

  int sign_at(double t) const;
  std::size_t num_segments() const { return signs.size(); }
  double segment_length(std::size_t i) const { return breakpoints[i + 1] - breakpoints[i]; }
};

/// Ideal instantaneous pi pulses over a total interrogation time.
class PulseSequence {
 public:
  /// Pulse times must be strictly increasing and strictly inside (0, T).
  PulseSequence(double total_time, std::vector<double> pulse_times);

  static PulseSequence free_evolution(double total_time) { return PulseSequence(total_time, {}); }

  double total_time() const { return total_time_; }
  std::span<const double> pulse_times() const { return pulse_times_; }
  std::size_t num_pulses() const { return pulse_times_.size(); }

  SwitchingProfile switching_profile() const;

 private:
  double total_time_;
  std::vector<double> pulse_times_;
};

/// Continuous piecewise-linear function given by its values at sorted knots.
class PiecewiseLinear {
 public:
  PiecewiseLinear(std::vector<double> knots, std::vector<double> values);

  double operator()(double s) const;
  std::span<const double> knots() const { return knots_; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

/// Quasi-static free-evolution dephasing factor exp(-kappa^2 t^2 / 2).
double nu_free_quasistatic(const NoiseModel& noise, double t);

/// p(s) = int_0^{T-s} xi(t) xi(t+s) dt, exact on [0, T].
PiecewiseLinear autocorrelation(const PulseSequence& seq);

/// Filter integral W(T) = int_0^T e^{-Rs} p(s) ds, integrated exactly
/// segment by segment over the piecewise-linear p(s).
double w_numeric(const PulseSequence& seq, double rate);
double w_numeric(const PulseSequence& seq, const NoiseModel& noise);

/// Closed-form W for the CPMG train of n_pulses (even) with spacing tau.
double w_cpmg_analytic(int n_pulses, double tau, double rate);
double w_cpmg_analytic(int n_pulses, double tau, const NoiseModel& noise);

/// exp(-kappa^2 w).
double nu_from_w(const NoiseModel& noise, double w);

struct McOptions {
  std::uint64_t n_traj = 100000;
  /// Time step; zero selects default_mc_step().
  double dt = 0.0;
  std::uint64_t seed = 1;
};

struct McEstimate {
  double estimate;
  double standard_error;
};

/// min(tau_c / 500, shortest switching interval / 50).
double default_mc_step(const PulseSequence& seq, const NoiseModel& noise);

/// Monte Carlo estimate of <cos(int xi(t) B(t) dt)> over OU trajectories
/// sampled on a uniform grid with the exact OU update. Pulse times are
/// snapped to the grid. Deterministic for a fixed seed.
McEstimate mc_nu_estimate(const PulseSequence& seq, const NoiseModel& noise,
                          const McOptions& options);

}  // namespace nvdetect
