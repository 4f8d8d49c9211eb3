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


#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "nvdetect/errors.hpp"
#include "nvdetect/optimize.hpp"

using namespace nvdetect;

namespace {

constexpr double kPi = std::numbers::pi;

Scenario dc_scenario(FieldHypothesis field) {
  Scenario s;
  s.field = field;
  return s;
}

Scenario ac_scenario(double sigma_b, double kappa = 3.6) {
  Scenario s;
  s.noise = NoiseModel(kappa, 25.0);
  s.field = AcCosine{1.0, sigma_b, 1.0};
  s.protocol = Cpmg{0.5};
  return s;
}

}  // namespace

TEST(GoldenSection, FindsParabolaMinimum) {
  const double x = golden_section_minimize([](double t) { return (t - 0.3) * (t - 0.3); }, 0.0, 1.0, 1e-10);
  EXPECT_NEAR(x, 0.3, 1e-8);
}

TEST(OptimizeTime, DcKnownOptimum) {
  // Reference values from a 10^6-point grid refined by root-finding at 30 digits.
  const Optimum best = optimize_time(dc_scenario(DcKnown{50.0}), 0.0, 3.0);
  EXPECT_NEAR(best.argument, 0.22433906146804984, 1e-7);
  EXPECT_NEAR(best.p_error, 0.19897001687541809, 1e-12);
  EXPECT_EQ(best.regime, Regime::Measure);
  ASSERT_TRUE(best.chi.has_value());
}

TEST(OptimizeTime, DcKnownOptimumIsStationary) {
  const double kappa = 3.6;
  for (double b : {20.0, 35.0, 50.0, 80.0}) {
    const Optimum best = optimize_time(dc_scenario(DcKnown{b}), 0.0, 3.0);
    const double T = best.argument;
    const double c = kPi * 0.028 * b;
    const double a = kappa * kappa / 2;
    // d/dT [exp(-a T^2) |sin(c T)|] at the optimum.
    const double s = std::sin(c * T);
    const double deriv = std::exp(-a * T * T) * (c * std::cos(c * T) - 2 * a * T * s) * (s < 0 ? -1 : 1);
    ASSERT_GT(T, 0.0);
    ASSERT_LT(T, 3.0);
    EXPECT_LT(std::abs(deriv), 1e-6) << "b=" << b << " T*=" << T;
  }
}

TEST(OptimizeTime, NoFieldMeansCoinFlip) {
  const Optimum best = optimize_time(dc_scenario(DcKnown{0.0}), 0.0, 3.0);
  EXPECT_NEAR(best.p_error, 0.5, 1e-15);
  const Optimum weak = optimize_time(dc_scenario(DcKnown{1e-6}), 0.0, 3.0);
  EXPECT_NEAR(weak.p_error, 0.5, 1e-6);
}

TEST(OptimizeTime, FieldUncertaintyOrdering) {
  double prev = 0.0;
  for (double sigma : {1.0, 25.0, 50.0}) {
    const double pe = optimize_time(dc_scenario(DcGaussian{50.0, sigma}), 0.0, 3.0).p_error;
    EXPECT_GT(pe, prev) << sigma;
    prev = pe;
  }
}

TEST(OptimizeTime, BeatsRandomProbes) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (const FieldHypothesis& field : {FieldHypothesis{DcKnown{50.0}}, FieldHypothesis{DcKnown{13.0}},
                                        FieldHypothesis{DcGaussian{50.0, 25.0}}}) {
    const Scenario s = dc_scenario(field);
    const Optimum best = optimize_time(s, 0.0, 3.0);
    for (int i = 0; i < 10000; ++i) EXPECT_LE(best.p_error, evaluate(s, u(rng)).p_error + 1e-15);
  }
}

TEST(OptimizeTime, NodeLockedBeatsRandomProbes) {
  Scenario s;
  s.field = MultiTone{{{1.0, 1.0}, {2.0, 1.5}}};
  s.protocol = NodeLocked{};
  const Optimum best = optimize_time(s, 0.1, 6.0);
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.1, 6.0);
  for (int i = 0; i < 2000; ++i) EXPECT_LE(best.p_error, evaluate(s, u(rng)).p_error + 1e-15);
  EXPECT_LT(best.p_error, 0.5);
}

TEST(OptimizeTime, Deterministic) {
  const Scenario s = dc_scenario(DcGaussian{50.0, 25.0});
  const Optimum a = optimize_time(s, 0.0, 3.0);
  const Optimum b = optimize_time(s, 0.0, 3.0);
  EXPECT_EQ(a.argument, b.argument);
  EXPECT_EQ(a.p_error, b.p_error);
}

TEST(OptimizeTime, RejectsEmptyRange) {
  const Scenario s = dc_scenario(DcKnown{50.0});
  EXPECT_THROW(optimize_time(s, 1.0, 1.0), DomainError);
  EXPECT_THROW(optimize_time(s, 2.0, 1.0), DomainError);
}

TEST(OptimizePulses, CpmgAnchor) {
  const Optimum best = optimize_pulses(ac_scenario(0.0), 2, 400);
  EXPECT_NEAR(best.p_error, 0.124, 0.01);
  // Frozen from an exhaustive scan of the closed forms.
  EXPECT_EQ(best.argument, 50.0);
  EXPECT_NEAR(best.p_error, 0.1238550652, 1e-9);
}

TEST(OptimizePulses, FieldUncertaintyOrdering) {
  double prev = optimize_pulses(ac_scenario(0.0), 2, 400).p_error;
  for (double sigma : {0.2, 0.4, 0.6}) {
    const double pe = optimize_pulses(ac_scenario(sigma), 2, 400).p_error;
    EXPECT_GT(pe, prev) << sigma;
    prev = pe;
  }
}

TEST(OptimizePulses, BeatsEveryEvenPulseCount) {
  const Scenario s = ac_scenario(0.4);
  const Optimum best = optimize_pulses(s, 2, 400);
  EXPECT_EQ(static_cast<int>(best.argument) % 2, 0);
  for (int n = 2; n <= 400; n += 2) EXPECT_LE(best.p_error, evaluate(s, n).p_error);
}

TEST(OptimizePulses, NoiselessOptimumIsPurePhase) {
  // Accumulated phase 2 N gamma b0 / f closest to pi (mod 2 pi) is at N = 56.
  const Optimum best = optimize_pulses(ac_scenario(0.0, 0.0), 2, 400);
  EXPECT_EQ(best.argument, 56.0);
  EXPECT_NEAR(best.nu, 1.0, 1e-15);
  EXPECT_NEAR(best.p_error, 0.5 * (1.0 - std::abs(std::sin(56 * 0.028))), 1e-14);
}

TEST(OptimizePulses, RejectsEmptyRange) {
  EXPECT_THROW(optimize_pulses(ac_scenario(0.0), 10, 8), DomainError);
  EXPECT_THROW(optimize_pulses(ac_scenario(0.0), 3, 3), DomainError);
}
