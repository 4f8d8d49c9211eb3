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
#include <variant>
#include <vector>

#include "nvdetect/noise.hpp"

namespace nvdetect {

using Complex = std::complex<double>;

/// Gyromagnetic ratio in MHz/uT (28 Hz/nT).
class Gyromagnetic {
 public:
  constexpr Gyromagnetic() = default;
  explicit Gyromagnetic(double gamma);
  double value() const { return gamma_; }

 private:
  double gamma_ = 0.028;
};

/// Static field of known strength b (uT).
struct DcKnown {
  double b;
};

/// Static field with Gaussian prior N(b0, sigma_b^2) on its strength (uT).
struct DcGaussian {
  double b0;
  double sigma_b;
};

/// B(t) = b cos(2 pi f t) with Gaussian amplitude prior; f in MHz. A nonzero
/// sigma_f adds a Gaussian prior on the frequency.
struct AcCosine {
  double b0;
  double sigma_b;
  double f;
  double sigma_f = 0.0;
};

struct Tone {
  double amplitude;  // uT
  double frequency;  // MHz
  double phase = 0.0;  // rad
};

/// Deterministic waveform B(t) = sum_i b_i sin(2 pi f_i t + phase_i).
struct MultiTone {
  std::vector<Tone> terms;

  double value(double t) const;
  double max_frequency() const;
  /// Upper bound on max |B|.
  double amplitude_bound() const;
};

using FieldHypothesis = std::variant<DcKnown, DcGaussian, AcCosine, MultiTone>;

/// Throws DomainError if sigma_b < 0, f <= 0, or a MultiTone is empty or has
/// repeated frequencies.
void validate(const FieldHypothesis& field);

/// exp(-i 2 pi gamma b t).
Complex mu_dc_known(double b, Gyromagnetic gamma, double t);

/// Gaussian average of mu_dc_known over b.
Complex mu_dc_gaussian(double b0, double sigma_b, Gyromagnetic gamma, double t);

/// Phase factor for a cosine field under CPMG with tau = 1/(2f).
Complex mu_ac_cpmg(double b0, double sigma_b, Gyromagnetic gamma, double f, int n_pulses);

/// Average of exp(-i theta b) over b ~ N(b0, sigma_b^2), where theta is the
/// accumulated phase per unit amplitude.
Complex mu_gaussian_amplitude(double theta_per_unit, double b0, double sigma_b);

/// CPMG train: T = N tau, pulses at tau/2, 3tau/2, ..., (2N-1)tau/2.
PulseSequence cpmg_sequence(int n_pulses, double tau);

/// Sign changes of the waveform strictly inside (0, t_max), located by a scan
/// with 20 points per period of the highest frequency and bisection to 1e-12 us.
std::vector<double> find_nodes(const MultiTone& field, double t_max);

/// Pulses on every interior node of the waveform in (0, T).
PulseSequence node_locked_sequence(const MultiTone& field, double total_time);

/// int_0^T xi(t) cos(2 pi f t + phase) dt, exact.
double switched_cosine_integral(const PulseSequence& seq, double f, double phase = 0.0);

/// int_0^T xi(t) B(t) dt for a waveform, exact.
double switched_field_integral(const MultiTone& field, const PulseSequence& seq);

/// exp(-i 2 pi gamma int xi B dt) for a known waveform whose sign changes
/// carry the pulses. Throws ContractError if a pulse is further than 1e-9 us
/// from a node.
Complex mu_waveform_rectified(const MultiTone& field, const PulseSequence& seq, Gyromagnetic gamma);

/// Phase factor of a cosine field with Gaussian amplitude and frequency priors
/// under an arbitrary pulse sequence; the frequency average uses 64-point
/// Gauss-Hermite quadrature.
Complex mu_ac_marginal(const AcCosine& field, const PulseSequence& seq, Gyromagnetic gamma);

struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // normalised to sum to 1 (probabilists' form)
};

/// n-point rule for expectations over a standard normal variable.
GaussHermiteRule gauss_hermite(int n);

}  // namespace nvdetect
