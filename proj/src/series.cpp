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

#include "nvdetect/series.hpp"

#include <cmath>

namespace nvdetect::detail {

namespace {

// sum_{k>=k0} (-x)^k / k! * weight(k)
template <typename Weight>
double exp_tail(double x, int k0, Weight weight) {
  double term = 1.0;
  for (int k = 1; k <= k0; ++k) term *= -x / k;
  double sum = 0.0;
  for (int k = k0; k < k0 + 60; ++k) {
    const double contrib = term * weight(k);
    sum += contrib;
    if (std::abs(contrib) <= 1e-18 * std::abs(sum)) break;
    term *= -x / (k + 1);
  }
  return sum;
}

}  // namespace

double phi1(double x) {
  if (std::abs(x) < 0.5) return exp_tail(x, 0, [](int k) { return 1.0 / (k + 1); });
  return -std::expm1(-x) / x;
}

double phi2(double x) {
  if (std::abs(x) < 0.5) return exp_tail(x, 0, [](int k) { return 1.0 / (k + 2); });
  return (1.0 - std::exp(-x) * (1.0 + x)) / (x * x);
}

double exp_remainder2(double x) {
  if (std::abs(x) < 1.0) return exp_tail(x, 2, [](int) { return 1.0; });
  return std::expm1(-x) + x;
}

double exp_remainder3(double x) {
  if (std::abs(x) < 2.0) return exp_tail(x, 3, [](int) { return 1.0; });
  return std::expm1(-x) + x - 0.5 * x * x;
}

double ou_bridge_integral_variance(double y) {
  if (y < 0.2) {
    const double y2 = y * y;
    // odd series: y/6 - y^3/60 + 17y^5/10080 - 31y^7/181440 + 691y^9/39916800 - ...
    return y * (1.0 / 6 +
                y2 * (-1.0 / 60 +
                      y2 * (17.0 / 10080 +
                            y2 * (-31.0 / 181440 +
                                  y2 * (691.0 / 39916800 - y2 * 5461.0 / 3113510400)))));
  }
  const double em = -std::expm1(-y);  // 1 - e^{-y}
  const double a = 1.0 - em;
  const double unconditional = (2.0 * (y - em) - em * em) / (y * y);
  const double explained = em * em * em / (y * y * (1.0 + a));
  return unconditional - explained;
}

}  // namespace nvdetect::detail
