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

#include "nvdetect/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include <Eigen/Eigenvalues>

#include "nvdetect/errors.hpp"

namespace nvdetect {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNodeTolerance = 1e-9;
constexpr double kBisectionTolerance = 1e-12;
constexpr int kScanPointsPerPeriod = 20;
constexpr int kFrequencyQuadratureNodes = 64;
}  // namespace

Gyromagnetic::Gyromagnetic(double gamma) : gamma_(gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("gyromagnetic ratio must be positive");
  }
}

double MultiTone::value(double t) const {
  double b = 0.0;
  for (const auto& term : terms) b += term.amplitude * std::sin(kTwoPi * term.frequency * t + term.phase);
  return b;
}

double MultiTone::max_frequency() const {
  double f = 0.0;
  for (const auto& term : terms) f = std::max(f, term.frequency);
  return f;
}

double MultiTone::amplitude_bound() const {
  double a = 0.0;
  for (const auto& term : terms) a += std::abs(term.amplitude);
  return a;
}

void validate(const FieldHypothesis& field) {
  struct Visitor {
    void operator()(const DcKnown& f) const {
      if (!std::isfinite(f.b)) throw DomainError("dc field: b must be finite");
    }
    void operator()(const DcGaussian& f) const {
      if (!std::isfinite(f.b0)) throw DomainError("dc field: b0 must be finite");
      if (!(f.sigma_b >= 0.0)) throw DomainError("dc field: sigma_b must be non-negative");
    }
    void operator()(const AcCosine& f) const {
      if (!std::isfinite(f.b0)) throw DomainError("ac field: b0 must be finite");
      if (!(f.sigma_b >= 0.0)) throw DomainError("ac field: sigma_b must be non-negative");
      if (!(f.f > 0.0)) throw DomainError("ac field: frequency must be positive");
      if (!(f.sigma_f >= 0.0)) throw DomainError("ac field: sigma_f must be non-negative");
    }
    void operator()(const MultiTone& f) const {
      if (f.terms.empty()) throw DomainError("multi-tone field: needs at least one term");
      std::set<double> seen;
      for (const auto& t : f.terms) {
        if (!(t.frequency > 0.0)) throw DomainError("multi-tone field: frequencies must be positive");
        if (!std::isfinite(t.amplitude) || !std::isfinite(t.phase)) {
          throw DomainError("multi-tone field: amplitude and phase must be finite");
        }
        if (!seen.insert(t.frequency).second) {
          throw DomainError("multi-tone field: frequencies must be distinct");
        }
      }
    }
  };
  std::visit(Visitor{}, field);
}

Complex mu_dc_known(double b, Gyromagnetic gamma, double t) {
  if (!(t >= 0.0)) throw DomainError("mu_dc_known: time must be non-negative");
  return std::polar(1.0, -kTwoPi * gamma.value() * b * t);
}

Complex mu_gaussian_amplitude(double theta_per_unit, double b0, double sigma_b) {
  if (!(sigma_b >= 0.0)) throw DomainError("sigma_b must be non-negative");
  const double spread = theta_per_unit * sigma_b;
  return std::polar(std::exp(-0.5 * spread * spread), -theta_per_unit * b0);
}

Complex mu_dc_gaussian(double b0, double sigma_b, Gyromagnetic gamma, double t) {
  if (!(t >= 0.0)) throw DomainError("mu_dc_gaussian: time must be non-negative");
  return mu_gaussian_amplitude(kTwoPi * gamma.value() * t, b0, sigma_b);
}

Complex mu_ac_cpmg(double b0, double sigma_b, Gyromagnetic gamma, double f, int n_pulses) {
  if (n_pulses < 2 || n_pulses % 2 != 0) {
    throw DomainError("mu_ac_cpmg: pulse count must be even and >= 2, got " + std::to_string(n_pulses));
  }
  if (!(f > 0.0)) throw DomainError("mu_ac_cpmg: frequency must be positive");
  if (!(sigma_b >= 0.0)) throw DomainError("mu_ac_cpmg: sigma_b must be non-negative");
  const double g = gamma.value();
  const double n = n_pulses;
  const double modulus = std::exp(-2.0 * n * n * g * g * sigma_b * sigma_b / (f * f));
  return std::polar(modulus, -2.0 * n * g * b0 / f);
}

PulseSequence cpmg_sequence(int n_pulses, double tau) {
  if (n_pulses < 2 || n_pulses % 2 != 0) {
    throw DomainError("cpmg_sequence: pulse count must be even and >= 2, got " + std::to_string(n_pulses));
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("cpmg_sequence: tau must be positive");
  std::vector<double> pulses(static_cast<std::size_t>(n_pulses));
  for (int k = 0; k < n_pulses; ++k) pulses[static_cast<std::size_t>(k)] = (k + 0.5) * tau;
  return PulseSequence(n_pulses * tau, std::move(pulses));
}

std::vector<double> find_nodes(const MultiTone& field, double t_max) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("find_nodes: t_max must be positive");
  validate(field);
  if (field.amplitude_bound() == 0.0) throw DomainError("find_nodes: field is identically zero");

  const double f_max = field.max_frequency();
  const auto n = static_cast<std::size_t>(
      std::max(static_cast<double>(kScanPointsPerPeriod), std::ceil(t_max * f_max * kScanPointsPerPeriod)));
  const double h = t_max / static_cast<double>(n);

  std::vector<double> v(n + 1);
  for (std::size_t k = 0; k <= n; ++k) v[k] = field.value(k == n ? t_max : k * h);

  auto interior = [&](double t) { return t > kNodeTolerance && t < t_max - kNodeTolerance; };

  std::vector<double> nodes;
  for (std::size_t k = 0; k < n; ++k) {
    const double t_k = k * h;
    if (v[k] == 0.0) {
      if (k > 0 && v[k - 1] * v[k + 1] < 0.0 && interior(t_k)) nodes.push_back(t_k);
      continue;
    }
    if (v[k] * v[k + 1] >= 0.0) continue;
    double lo = t_k;
    double hi = k + 1 == n ? t_max : (k + 1) * h;
    double v_lo = v[k];
    while (hi - lo > kBisectionTolerance) {
      const double mid = 0.5 * (lo + hi);
      const double v_mid = field.value(mid);
      if (v_mid == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((v_mid < 0.0) == (v_lo < 0.0)) {
        lo = mid;
        v_lo = v_mid;
      } else {
        hi = mid;
      }
    }
    const double root = 0.5 * (lo + hi);
    if (interior(root)) nodes.push_back(root);
  }
  return nodes;
}

PulseSequence node_locked_sequence(const MultiTone& field, double total_time) {
  if (total_time == 0.0) return PulseSequence::free_evolution(0.0);
  return PulseSequence(total_time, find_nodes(field, total_time));
}

double switched_cosine_integral(const PulseSequence& seq, double f, double phase) {
  const SwitchingProfile prof = seq.switching_profile();
  const double omega = kTwoPi * f;
  double total = 0.0;
  for (std::size_t i = 0; i < prof.num_segments(); ++i) {
    const double a = prof.breakpoints[i];
    const double b = prof.breakpoints[i + 1];
    const double piece = omega == 0.0 ? std::cos(phase) * (b - a)
                                      : (std::sin(omega * b + phase) - std::sin(omega * a + phase)) / omega;
    total += prof.signs[i] * piece;
  }
  return total;
}

double switched_field_integral(const MultiTone& field, const PulseSequence& seq) {
  double total = 0.0;
  // sin(x + phase) = cos(x + phase - pi/2)
  for (const auto& term : field.terms) {
    total += term.amplitude *
             switched_cosine_integral(seq, term.frequency, term.phase - 0.5 * std::numbers::pi);
  }
  return total;
}

Complex mu_waveform_rectified(const MultiTone& field, const PulseSequence& seq, Gyromagnetic gamma) {
  validate(field);
  for (double t : seq.pulse_times()) {
    const double before = field.value(t - kNodeTolerance);
    const double after = field.value(t + kNodeTolerance);
    if (field.value(t) != 0.0 && before * after > 0.0) {
      throw ContractError("mu_waveform_rectified: pulse at t=" + std::to_string(t) +
                          " us is not on a node of the field");
    }
  }
  return std::polar(1.0, -kTwoPi * gamma.value() * switched_field_integral(field, seq));
}

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw DomainError("gauss_hermite: need at least one node");
  // Golub-Welsch on the Jacobi matrix of the probabilists' Hermite polynomials.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  GaussHermiteRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double v0 = solver.eigenvectors()(0, k);
    rule.nodes[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    rule.weights[static_cast<std::size_t>(k)] = v0 * v0;
  }
  return rule;
}

Complex mu_ac_marginal(const AcCosine& field, const PulseSequence& seq, Gyromagnetic gamma) {
  validate(FieldHypothesis{field});
  const double scale = kTwoPi * gamma.value();
  auto at_frequency = [&](double f) {
    return mu_gaussian_amplitude(scale * switched_cosine_integral(seq, f), field.b0, field.sigma_b);
  };
  if (field.sigma_f == 0.0) return at_frequency(field.f);
  static const GaussHermiteRule rule = gauss_hermite(kFrequencyQuadratureNodes);
  Complex mu{0.0, 0.0};
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    mu += rule.weights[k] * at_frequency(field.f + field.sigma_f * rule.nodes[k]);
  }
  return mu;
}

}  // namespace nvdetect
