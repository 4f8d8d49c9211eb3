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

#include <gtest/gtest.h>

#include "nvdetect/errors.hpp"
#include "nvdetect/optimize.hpp"
#include "nvdetect/simulate.hpp"
#include "nvdetect/validation.hpp"

using namespace nvdetect;

namespace {

double se(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

Scenario cpmg_anchor() {
  Scenario s;
  s.field = AcCosine{1.0, 0.0, 1.0};
  s.protocol = Cpmg{0.5};
  return s;
}

// Half-turn phase with coherence 0.8 under the exact filter integral: both conditional errors 0.1.
Scenario symmetric_tenth() {
  const double T = 1.0 / (2.0 * 0.028 * 50.0);
  const double w = w_numeric(PulseSequence::free_evolution(T), 1e-6);
  Scenario s;
  s.noise = NoiseModel(std::sqrt(-std::log(0.8) / w), 1e6);
  s.field = DcKnown{50.0};
  s.protocol = FreeEvolution{Dephasing::Exact};
  return s;
}

}  // namespace

TEST(Simulate, SymmetricScenarioHasTenthConditionalErrors) {
  const Scenario s = symmetric_tenth();
  const Evaluation e = evaluate(s, 1.0 / (2.0 * 0.028 * 50.0));
  EXPECT_NEAR(e.coherence.nu(), 0.8, 1e-12);
  EXPECT_NEAR(e.outcome.c_0_given_1, 0.1, 1e-12);
  EXPECT_NEAR(e.outcome.c_1_given_0, 0.1, 1e-12);
  EXPECT_NEAR(closed_form_error(s, e.argument, 3), 0.028, 1e-12);
}

TEST(Simulate, BlindDetectorErrsWithPresentPrior) {
  Scenario s;
  s.field = DcKnown{50.0};
  s.priors = Priors(0.3, 0.7);
  s.eta = 0.0;
  const EmpiricalResult r = simulate_detection(s, 0.22, {100000, 5, 1});
  EXPECT_LT(std::abs(r.error_rate - 0.7), 3.0 * se(0.7, 1e5)) << r.error_rate;
  EXPECT_NEAR(closed_form_error(s, 0.22, 1), 0.7, 1e-15);
}

TEST(Simulate, NoiselessDcAtOptimalTime) {
  Scenario s;
  s.noise = NoiseModel(0.0, 25.0);
  s.field = DcKnown{50.0};
  const Optimum best = optimize_time(s, 0.0, 3.0);
  const EmpiricalResult r = simulate_detection(s, best.argument, {100000, 6, 1});
  // The optimum reaches a zero error rate, so every shot must be decided correctly.
  EXPECT_NEAR(best.p_error, 0.0, 1e-12);
  EXPECT_LE(std::abs(r.error_rate - best.p_error), 3.0 * se(best.p_error, 1e5) + 1e-12)
      << r.error_rate << " vs " << best.p_error;
}

TEST(Simulate, CpmgAnchorAtMillionShots) {
  const Scenario s = cpmg_anchor();
  const Optimum best = optimize_pulses(s, 2, 400);
  const EmpiricalResult r = simulate_detection(s, best.argument, {1000000, 7, 1});
  EXPECT_LT(std::abs(r.error_rate - 0.124), 3.0 * r.standard_error) << r.error_rate;
  EXPECT_LT(std::abs(r.error_rate - best.p_error), 3.0 * se(best.p_error, 1e6)) << r.error_rate;
}

TEST(Simulate, ThreeCopyMajority) {
  const Scenario s = symmetric_tenth();
  const EmpiricalResult r = simulate_multicopy(s, 1.0 / (2.0 * 0.028 * 50.0), 3, {200000, 8, 1});
  EXPECT_LT(std::abs(r.error_rate - 0.028), 3.0 * se(0.028, 2e5)) << r.error_rate;
}

TEST(Simulate, EvenCopiesMatchOneFewer) {
  const Scenario s = symmetric_tenth();
  const double T = 1.0 / (2.0 * 0.028 * 50.0);
  const EmpiricalResult one = simulate_multicopy(s, T, 1, {200000, 9, 1});
  const EmpiricalResult two = simulate_multicopy(s, T, 2, {200000, 10, 1});
  const double combined = std::hypot(one.standard_error, two.standard_error);
  EXPECT_LT(std::abs(one.error_rate - two.error_rate), 3.0 * combined);
  EXPECT_LT(std::abs(two.error_rate - 0.1), 3.0 * se(0.1, 2e5));
}

TEST(Simulate, SingleCopyIsDetection) {
  const Scenario s = cpmg_anchor();
  const EmpiricalResult a = simulate_multicopy(s, 20, 1, {20000, 11, 1});
  const EmpiricalResult b = simulate_detection(s, 20, {20000, 11, 1});
  EXPECT_EQ(a.error_rate, b.error_rate);
}

TEST(Simulate, ReproducibleAcrossRunsAndThreadCounts) {
  Scenario s;
  s.field = DcGaussian{50.0, 25.0};
  const EmpiricalResult a = simulate_detection(s, 0.2, {50000, 12, 1});
  const EmpiricalResult b = simulate_detection(s, 0.2, {50000, 12, 1});
  const EmpiricalResult c = simulate_detection(s, 0.2, {50000, 12, 4});
  const EmpiricalResult d = simulate_detection(s, 0.2, {50000, 13, 1});
  EXPECT_EQ(a.error_rate, b.error_rate);
  EXPECT_EQ(a.error_rate, c.error_rate);
  EXPECT_NE(a.error_rate, d.error_rate);
  EXPECT_EQ(a.seed, 12u);
  EXPECT_GE(a.error_rate, 0.0);
  EXPECT_LE(a.error_rate, 1.0);
  EXPECT_DOUBLE_EQ(a.standard_error, se(a.error_rate, 5e4));
}

TEST(Simulate, RejectsBadArguments) {
  const Scenario s = cpmg_anchor();
  EXPECT_THROW(simulate_multicopy(s, 20, 0, {1000, 1, 1}), DomainError);
  EXPECT_THROW(simulate_detection(s, 20, {0, 1, 1}), DomainError);
}

TEST(ValidationBattery, HasTwentySeededCases) {
  const auto a = validation_battery();
  const auto b = validation_battery();
  ASSERT_EQ(a.size(), 20u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].name, b[i].name);
    EXPECT_EQ(a[i].argument, b[i].argument);
    EXPECT_EQ(a[i].closed_form, b[i].closed_form);
    EXPECT_GT(a[i].closed_form, 0.0);
    EXPECT_LT(a[i].closed_form, 0.5 + 1e-12);
  }
}
