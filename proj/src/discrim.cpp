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

#include "nvdetect/discrim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "nvdetect/errors.hpp"

namespace nvdetect {

namespace {
constexpr double kZeroEigenvalue = 1e-14;
constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return a <= -kPi ? a + 2.0 * kPi : a;
}

// y^k with 0^0 = 1, in log space.
double log_pow(int k, double y) { return k == 0 ? 0.0 : k * std::log(y); }

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("detection efficiency must lie in [0, 1]");
}
}  // namespace

Priors::Priors(double p0, double p1) : p0_(p0), p1_(p1) {
  if (!(p0 >= 0.0) || !(p1 >= 0.0) || std::abs(p0 + p1 - 1.0) > 1e-12) {
    throw DomainError("priors must be non-negative and sum to one");
  }
}

CoherencePair::CoherencePair(double nu, Complex mu) : nu_(nu), mu_(mu) {
  if (!(nu >= 0.0 && nu <= 1.0 + 1e-12)) throw DomainError("coherence: nu must lie in [0, 1]");
  if (!(std::abs(mu) <= 1.0 + 1e-12)) throw DomainError("coherence: |mu| must not exceed 1");
}

DensityMatrix::DensityMatrix(const Matrix2c& m) : m_(m) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ContractError("density matrix must be Hermitian");
  }
  if (std::abs(m.trace() - Complex(1.0, 0.0)) > 1e-12) {
    throw ContractError("density matrix must have unit trace");
  }
  // 2x2 Hermitian: PSD iff diagonal and determinant are non-negative.
  const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  if (m(0, 0).real() < -1e-10 || m(1, 1).real() < -1e-10 || det < -1e-10) {
    throw ContractError("density matrix must be positive semidefinite");
  }
}

DensityMatrix rho_absent(const CoherencePair& coh) {
  Matrix2c m;
  m << 0.5, 0.5 * coh.nu(), 0.5 * coh.nu(), 0.5;
  return DensityMatrix(m);
}

DensityMatrix rho_present(const CoherencePair& coh) {
  const Complex c = 0.5 * coh.nu() * coh.mu();
  Matrix2c m;
  m << 0.5, c, std::conj(c), 0.5;
  return DensityMatrix(m);
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Measure: return "measure";
    case Regime::AlwaysPresent: return "always_present";
    case Regime::AlwaysAbsent: return "always_absent";
    case Regime::Indifferent: return "indifferent";
  }
  return "unknown";
}

Eigenvalues lambda_eigenvalues(const Priors& priors, const CoherencePair& coh) {
  const double p0 = priors.p0();
  const double p1 = priors.p1();
  // sqrt(p0^2 + p1^2|mu|^2 - 2 p0 p1 Re mu) = |p1 mu - p0|
  const double root = std::abs(p1 * coh.mu() - p0);
  const double centre = 0.5 * (p1 - p0);
  const double half_gap = 0.5 * coh.nu() * root;
  return {centre - half_gap, centre + half_gap};
}

Regime classify_regime(double lambda_minus, double lambda_plus) {
  const bool zero_minus = std::abs(lambda_minus) < kZeroEigenvalue;
  const bool zero_plus = std::abs(lambda_plus) < kZeroEigenvalue;
  if (zero_minus && zero_plus) return Regime::Indifferent;
  if (zero_minus) return lambda_plus > 0.0 ? Regime::AlwaysPresent : Regime::AlwaysAbsent;
  if (zero_plus) return lambda_minus > 0.0 ? Regime::AlwaysPresent : Regime::AlwaysAbsent;
  if (lambda_minus > 0.0 && lambda_plus > 0.0) return Regime::AlwaysPresent;
  if (lambda_minus < 0.0 && lambda_plus < 0.0) return Regime::AlwaysAbsent;
  return Regime::Measure;
}

double helstrom_error(const Priors& priors, const CoherencePair& coh) {
  const Eigenvalues ev = lambda_eigenvalues(priors, coh);
  return std::max(0.0, 0.5 * (1.0 - std::abs(ev.lambda_minus) - std::abs(ev.lambda_plus)));
}

double optimal_chi(const Priors& priors, const CoherencePair& coh) {
  const Eigenvalues ev = lambda_eigenvalues(priors, coh);
  if (classify_regime(ev.lambda_minus, ev.lambda_plus) != Regime::Measure) {
    throw ContractError("optimal_chi: no measurement is needed outside the Measure regime");
  }
  const double num = priors.p1() * coh.mu().imag();
  const double den = priors.p0() - priors.p1() * coh.mu().real();
  const double branch = den == 0.0 ? 0.5 * kPi : std::atan(num / den);
  const double other = branch + kPi;
  const double chi = error_for_measurement(priors, coh, branch) <=
                             error_for_measurement(priors, coh, other)
                         ? branch
                         : other;
  return wrap_angle(chi);
}

std::pair<Matrix2c, Matrix2c> projectors_from_chi(double chi) {
  const Complex e = std::polar(1.0, chi);
  Matrix2c pi0;
  Matrix2c pi1;
  pi0 << 0.5, 0.5 * std::conj(e), 0.5 * e, 0.5;
  pi1 << 0.5, -0.5 * std::conj(e), -0.5 * e, 0.5;
  return {pi0, pi1};
}

ConditionalErrors conditional_errors(const CoherencePair& coh, double chi) {
  const double nu = coh.nu();
  const double c10 = 0.5 * (1.0 - nu * std::cos(chi));
  const double c01 = 0.5 * (1.0 + nu * (coh.mu() * std::polar(1.0, chi)).real());
  return {c10, c01};
}

double error_for_measurement(const Priors& priors, const CoherencePair& coh, double chi) {
  const ConditionalErrors c = conditional_errors(coh, chi);
  return priors.p0() * c.c_1_given_0 + priors.p1() * c.c_0_given_1;
}

DiscriminationOutcome discriminate(const Priors& priors, const CoherencePair& coh) {
  const Eigenvalues ev = lambda_eigenvalues(priors, coh);
  DiscriminationOutcome out{};
  out.regime = classify_regime(ev.lambda_minus, ev.lambda_plus);
  out.lambda_minus = ev.lambda_minus;
  out.lambda_plus = ev.lambda_plus;
  out.p_error = helstrom_error(priors, coh);
  switch (out.regime) {
    case Regime::Measure: {
      const double chi = optimal_chi(priors, coh);
      const ConditionalErrors c = conditional_errors(coh, chi);
      out.chi = chi;
      out.c_1_given_0 = c.c_1_given_0;
      out.c_0_given_1 = c.c_0_given_1;
      break;
    }
    case Regime::AlwaysPresent:
      out.c_0_given_1 = 0.0;
      out.c_1_given_0 = 1.0;
      break;
    case Regime::AlwaysAbsent:
    case Regime::Indifferent:
      out.c_0_given_1 = 1.0;
      out.c_1_given_0 = 0.0;
      break;
  }
  return out;
}

GeneralHelstrom helstrom_general(const DensityMatrix& rho0, const DensityMatrix& rho1,
                                 const Priors& priors) {
  const Matrix2c lambda = priors.p1() * rho1.matrix() - priors.p0() * rho0.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix2c> solver(lambda);
  const Eigen::Vector2d values = solver.eigenvalues();  // ascending
  const Matrix2c vectors = solver.eigenvectors();

  GeneralHelstrom out{};
  out.pi0 = Matrix2c::Zero();
  out.pi1 = Matrix2c::Zero();
  double sum_abs = 0.0;
  for (int k = 0; k < 2; ++k) {
    const Eigen::Vector2cd v = vectors.col(k);
    if (values(k) < -kZeroEigenvalue) out.pi0 += v * v.adjoint();
    else out.pi1 += v * v.adjoint();
    sum_abs += std::abs(values(k));
  }
  out.eigenvalues = {values(0), values(1)};
  out.regime = classify_regime(values(0), values(1));
  out.p_error = std::max(0.0, 0.5 * (1.0 - sum_abs));
  return out;
}

double multicopy_error(const Priors& priors, const ConditionalErrors& errors, int m_copies) {
  if (m_copies < 1) throw DomainError("multicopy_error: need at least one copy");
  const int m = m_copies % 2 == 0 ? m_copies - 1 : m_copies;
  const double log_m_fact = std::lgamma(m + 1.0);

  // Probability that at most floor(m/2) of m copies are right, each wrong with prob c.
  auto majority_wrong = [&](double c) {
    double total = 0.0;
    for (int right = 0; right <= m / 2; ++right) {
      const double log_term = log_m_fact - std::lgamma(right + 1.0) - std::lgamma(m - right + 1.0) +
                              log_pow(right, 1.0 - c) + log_pow(m - right, c);
      total += std::exp(log_term);
    }
    return total;
  };
  return priors.p1() * majority_wrong(errors.c_0_given_1) +
         priors.p0() * majority_wrong(errors.c_1_given_0);
}

ConditionalErrors with_detection_efficiency(const ConditionalErrors& errors, double eta) {
  check_eta(eta);
  return {eta * errors.c_1_given_0, 1.0 - eta * (1.0 - errors.c_0_given_1)};
}

double inefficient_error(const Priors& priors, const CoherencePair& coh, double chi, double eta) {
  check_eta(eta);
  const double p0 = priors.p0();
  const double p1 = priors.p1();
  const double bracket = (p1 - p0) - coh.nu() * (p1 * (coh.mu() * std::polar(1.0, chi)).real() -
                                                 p0 * std::cos(chi));
  return p1 - 0.5 * eta * bracket;
}

}  // namespace nvdetect
