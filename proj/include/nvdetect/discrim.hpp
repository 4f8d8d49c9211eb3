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
#include <string_view>
#include <utility>

#include <Eigen/Core>

namespace nvdetect {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;

/// Prior probabilities of "no field" (p0) and "field present" (p1).
class Priors {
 public:
  /// Throws DomainError unless p0, p1 >= 0 and |p0 + p1 - 1| <= 1e-12.
  Priors(double p0, double p1);
  static Priors equal() { return Priors(0.5, 0.5); }
  static Priors from_present(double p1) { return Priors(1.0 - p1, p1); }

  double p0() const { return p0_; }
  double p1() const { return p1_; }

 private:
  double p0_;
  double p1_;
};

/// Off-diagonal data of the two candidate states after interrogation:
/// rho0 has coherence nu/2, rho1 has nu*mu/2.
class CoherencePair {
 public:
  /// Throws DomainError unless 0 <= nu <= 1 and |mu| <= 1 (1e-12 slack).
  CoherencePair(double nu, Complex mu);

  double nu() const { return nu_; }
  Complex mu() const { return mu_; }

 private:
  double nu_;
  Complex mu_;
};

/// 2x2 density matrix; the constructor enforces Hermiticity, unit trace
/// (1e-12) and positivity (1e-10), throwing ContractError otherwise.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Matrix2c& m);
  const Matrix2c& matrix() const { return m_; }

 private:
  Matrix2c m_;
};

DensityMatrix rho_absent(const CoherencePair& coh);
DensityMatrix rho_present(const CoherencePair& coh);

enum class Regime { Measure, AlwaysPresent, AlwaysAbsent, Indifferent };

std::string_view to_string(Regime regime);

struct Eigenvalues {
  double lambda_minus;
  double lambda_plus;
};

struct ConditionalErrors {
  double c_1_given_0;  // decide "present" when the field is absent
  double c_0_given_1;  // decide "absent" when the field is present
};

struct DiscriminationOutcome {
  Regime regime;
  double p_error;
  std::optional<double> chi;  // set only in the Measure regime
  double lambda_minus;
  double lambda_plus;
  double c_0_given_1;
  double c_1_given_0;

  ConditionalErrors conditionals() const { return {c_1_given_0, c_0_given_1}; }
};

/// Eigenvalues of Lambda = p1 rho1 - p0 rho0 in closed form.
Eigenvalues lambda_eigenvalues(const Priors& priors, const CoherencePair& coh);

/// Eigenvalues with magnitude below 1e-14 count as zero.
Regime classify_regime(double lambda_minus, double lambda_plus);

/// Minimum error probability 1/2 (1 - |lambda_-| - |lambda_+|).
double helstrom_error(const Priors& priors, const CoherencePair& coh);

/// Angle of the optimal projective measurement, |phi_+-> = (1, -+e^{i chi})/sqrt2.
/// Of the two solutions of the tangent condition (chi and chi + pi) the one
/// with the smaller error is returned, in (-pi, pi]. Throws ContractError
/// outside the Measure regime.
double optimal_chi(const Priors& priors, const CoherencePair& coh);

/// (Pi0, Pi1) = (|phi_-><phi_-|, |phi_+><phi_+|).
std::pair<Matrix2c, Matrix2c> projectors_from_chi(double chi);

/// C_{1|0} = Tr[rho0 Pi1] and C_{0|1} = Tr[rho1 Pi0] for the measurement chi.
ConditionalErrors conditional_errors(const CoherencePair& coh, double chi);

/// p0 C_{1|0} + p1 C_{0|1}.
double error_for_measurement(const Priors& priors, const CoherencePair& coh, double chi);

/// Full decision: regime, error, optimal angle and conditional errors. Outside
/// the Measure regime the decision is made without measuring and the
/// conditional errors describe that fixed guess.
DiscriminationOutcome discriminate(const Priors& priors, const CoherencePair& coh);

struct GeneralHelstrom {
  double p_error;
  Matrix2c pi0;
  Matrix2c pi1;
  Eigenvalues eigenvalues;
  Regime regime;
};

/// Reference path: assemble Lambda, diagonalise numerically and build the
/// projectors from its eigenvectors (negative eigenvalues -> Pi0, the rest -> Pi1).
GeneralHelstrom helstrom_general(const DensityMatrix& rho0, const DensityMatrix& rho1,
                                 const Priors& priors);

/// Majority vote over m copies with fixed measurements. Even m returns the
/// value for m - 1. Binomial terms are evaluated in log space.
double multicopy_error(const Priors& priors, const ConditionalErrors& errors, int m_copies);

/// Conditional errors once the bright outcome is only registered with
/// probability eta; a detected photon means "present".
ConditionalErrors with_detection_efficiency(const ConditionalErrors& errors, double eta);

/// Error probability with photon detection efficiency eta:
/// P1 - eta/2 [(P1 - P0) - nu (P1 Re(mu e^{i chi}) - P0 cos chi)].
double inefficient_error(const Priors& priors, const CoherencePair& coh, double chi, double eta);

}  // namespace nvdetect
