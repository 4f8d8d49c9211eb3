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


// Acceptance report: one PASS/FAIL line per criterion, with its measured
// value and runtime. Exits non-zero if any criterion fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>

#include "nvdetect/discrim.hpp"
#include "nvdetect/field.hpp"
#include "nvdetect/noise.hpp"
#include "nvdetect/optimize.hpp"
#include "nvdetect/validation.hpp"

using namespace nvdetect;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool ok;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

Scenario cpmg_scenario(double sigma_b) {
  Scenario s;
  s.field = AcCosine{1.0, sigma_b, 1.0};
  s.protocol = Cpmg{0.5};
  return s;
}

Scenario dc_scenario(FieldHypothesis field) {
  Scenario s;
  s.field = field;
  return s;
}

Verdict cpmg_anchor() {
  const Optimum o = optimize_pulses(cpmg_scenario(0.0), 2, 400);
  return {std::abs(o.p_error - 0.124) <= 0.01, fmt("min P_e = %.6f at N = %.0f", o.p_error, o.argument)};
}

Verdict dc_anchor() {
  const Optimum o = optimize_time(dc_scenario(DcKnown{50.0}), 0.0, 3.0);
  return {std::abs(o.p_error - 0.2) <= 0.02, fmt("min P_e = %.6f at T = %.6f us", o.p_error, o.argument)};
}

Verdict echo_time() {
  const NoiseModel noise(3.6, 25.0);
  auto f = [&](double T) {
    return nu_from_w(noise, w_numeric(PulseSequence(T, {T / 2}), noise)) - std::exp(-1.0);
  };
  double lo = 0.5, hi = 10.0;
  if (!(f(lo) > 0.0 && f(hi) < 0.0)) return {false, "root not bracketed"};
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  return {std::abs(t - 2.8) <= 0.2, fmt("nu = 1/e at T = %.6f us", t)};
}

Verdict cpmg_equivalence() {
  double worst = 0.0;
  for (int n : {2, 4, 8, 16, 32})
    for (double tau : {0.1, 0.25, 0.5, 1.0, 2.0})
      for (double rate : {0.01, 0.04, 0.2}) {
        const double numeric = w_numeric(cpmg_sequence(n, tau), rate);
        worst = std::max(worst, std::abs(w_cpmg_analytic(n, tau, rate) - numeric) / numeric);
      }
  return {worst < 1e-8, fmt("max relative deviation %.3e over 75 grid points", worst)};
}

Verdict helstrom_equivalence() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  double worst_grid = -1.0;
  int measured = 0;
  for (int i = 0; i < 1000; ++i) {
    const Priors priors = Priors::from_present(u(rng));
    const CoherencePair coh(u(rng), std::polar(u(rng), 2.0 * kPi * u(rng)));
    const Matrix2c lambda = priors.p1() * rho_present(coh).matrix() - priors.p0() * rho_absent(coh).matrix();
    Eigen::SelfAdjointEigenSolver<Matrix2c> solver(lambda);
    const double lm = solver.eigenvalues()(0);
    const double lp = solver.eigenvalues()(1);
    const double pe_eig = 0.5 * (1.0 - std::abs(lm) - std::abs(lp));
    const DiscriminationOutcome out = discriminate(priors, coh);
    worst = std::max({worst, std::abs(out.lambda_minus - lm), std::abs(out.lambda_plus - lp)});
    if (out.regime != Regime::Measure) continue;
    ++measured;
    worst = std::max(worst, std::abs(out.p_error - pe_eig));
    // Measurement angle from the positive eigenvector v: Pi1 = v v^dag with v ~ (1, -e^{i chi}).
    const Eigen::Vector2cd v = solver.eigenvectors().col(1);
    const double chi_eig = std::arg(-v(1) / v(0));
    worst = std::max(worst, std::abs(std::remainder(*out.chi - chi_eig, 2.0 * kPi)));
    const double best = error_for_measurement(priors, coh, *out.chi);
    for (int k = 0; k < 10000; ++k) {
      const double gap = best - error_for_measurement(priors, coh, -kPi + 2.0 * kPi * k / 10000);
      worst_grid = std::max(worst_grid, gap);
    }
  }
  return {worst < 1e-12 && worst_grid <= 1e-15,
          fmt("max deviation %.3e; grid never beats chi* (max excess %.3e)", worst, worst_grid) +
              " over " + std::to_string(measured) + " measure-regime cases"};
}

Verdict multicopy_oracle() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Priors priors = Priors::from_present(u(rng));
    const ConditionalErrors c{u(rng), u(rng)};
    for (int m = 1; m <= 9; ++m) {
      double total = 0.0;
      for (unsigned mask = 0; mask < (1u << m); ++mask) {
        const int wrong = std::popcount(mask);
        const double lose = 2 * wrong > m ? 1.0 : (2 * wrong == m ? 0.5 : 0.0);
        auto p = [&](double e) { return std::pow(e, wrong) * std::pow(1.0 - e, m - wrong); };
        total += lose * (priors.p1() * p(c.c_0_given_1) + priors.p0() * p(c.c_1_given_0));
      }
      worst = std::max(worst, std::abs(multicopy_error(priors, c, m) - total));
    }
  }
  const Optimum o = optimize_pulses(cpmg_scenario(0.0), 2, 400);
  const Evaluation e = evaluate(cpmg_scenario(0.0), o.argument);
  bool monotone = true;
  double prev = 0.0;
  for (int m = 1; m <= 41; m += 2) {
    const double y = -std::log(multicopy_error(Priors::equal(), e.outcome.conditionals(), m));
    monotone = monotone && y > prev;
    prev = y;
  }
  return {worst < 1e-14 && monotone,
          fmt("max enumeration deviation %.3e; -log P_e,41 = %.4f", worst, prev) +
              (monotone ? ", increasing over odd M" : ", NOT monotone")};
}

Verdict efficiency_model() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  double max_slope = -1.0;
  for (int i = 0; i < 1000; ++i) {
    const Priors priors = Priors::from_present(u(rng));
    const CoherencePair coh(u(rng), std::polar(u(rng), 2.0 * kPi * u(rng)));
    const DiscriminationOutcome out = discriminate(priors, coh);
    if (out.regime != Regime::Measure) continue;
    const double e0 = inefficient_error(priors, coh, *out.chi, 0.0);
    const double e1 = inefficient_error(priors, coh, *out.chi, 1.0);
    worst = std::max({worst, std::abs(e0 - priors.p1()), std::abs(e1 - out.p_error)});
    for (int k = 0; k <= 10; ++k) {
      const double eta = k / 10.0;
      worst = std::max(worst, std::abs(inefficient_error(priors, coh, *out.chi, eta) - (e0 + eta * (e1 - e0))));
    }
    max_slope = std::max(max_slope, e1 - e0);
  }
  const Evaluation e = evaluate(cpmg_scenario(0.0), 50);
  const double ideal_end = inefficient_error(Priors::equal(), e.coherence, *e.outcome.chi, 1.0);
  return {worst < 1e-12 && max_slope <= 0.0,
          fmt("max deviation %.3e; CPMG optimum endpoints 0.5 -> %.6f", worst, ideal_end)};
}

Verdict monte_carlo_battery() {
  const auto cases = validation_battery();
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  const auto outcomes = run_validation_battery(cases, 100000, 20240601, threads, 3.0);
  int passed = 0;
  double worst = 0.0;
  for (const auto& o : outcomes) {
    passed += o.passed;
    worst = std::max(worst, std::abs(o.z_score));
  }
  return {passed == static_cast<int>(cases.size()) && cases.size() == 20,
          std::to_string(passed) + "/" + std::to_string(cases.size()) + " scenarios within 3 SE" +
              fmt(" (max |z| = %.3f)", worst)};
}

Verdict ordering() {
  std::string detail = "DC minima";
  bool ok = true;
  double prev = 0.0;
  for (double sigma : {1.0, 25.0, 50.0}) {
    const double pe = optimize_time(dc_scenario(DcGaussian{50.0, sigma}), 0.0, 3.0).p_error;
    ok = ok && pe > prev;
    prev = pe;
    detail += fmt(" %.5f", pe);
  }
  detail += "; AC minima";
  prev = 0.0;
  for (double sigma : {0.2, 0.4, 0.6}) {
    const double pe = optimize_pulses(cpmg_scenario(sigma), 2, 400).p_error;
    ok = ok && pe > prev;
    prev = pe;
    detail += fmt(" %.5f", pe);
  }
  return {ok, detail};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Verdict()> check;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "CPMG anchor: min over N within 0.124 +- 0.01", 1.0, cpmg_anchor},
      {2, "DC anchor: min over T within 0.2 +- 0.02", 1.0, dc_anchor},
      {3, "echo dephasing time 2.8 +- 0.2 us", 1.0, echo_time},
      {4, "CPMG closed form vs piecewise integral < 1e-8", 5.0, cpmg_equivalence},
      {5, "Helstrom closed form vs eigendecomposition < 1e-12", 5.0, helstrom_equivalence},
      {6, "majority vote vs enumeration < 1e-14, monotone", 5.0, multicopy_oracle},
      {7, "efficiency model affine with exact endpoints", 1.0, efficiency_model},
      {8, "Monte Carlo battery, 20 x 1e5 shots within 3 SE", 60.0, monte_carlo_battery},
      {9, "minimum error increases with field uncertainty", 5.0, ordering},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = elapsed < c.budget_s;
    const bool ok = v.ok && in_time;
    failures += !ok;
    std::printf("%s [%d] %s: %s; %.3f s (budget %.0f s)%s\n", ok ? "PASS" : "FAIL", c.id, c.name,
                v.detail.c_str(), elapsed, c.budget_s, in_time ? "" : " OVER BUDGET");
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
