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

// Cancellation-free evaluations of small exponential combinations. Each one
// switches to its Taylor series below a threshold where the direct formula
// would lose more than a couple of digits.

namespace nvdetect::detail {

/// (1 - e^{-x}) / x, equal to the integral of e^{-xu} over u in [0, 1].
double phi1(double x);

/// (1 - e^{-x}(1 + x)) / x^2, equal to the integral of u e^{-xu} over [0, 1].
double phi2(double x);

/// e^{-x} - 1 + x.
double exp_remainder2(double x);

/// e^{-x} - 1 + x - x^2/2.
double exp_remainder3(double x);

/// Conditional variance of the integral of a unit-variance, unit-rate OU
/// process over [0, y], given its values at both ends, divided by y^2.
double ou_bridge_integral_variance(double y);

}  // namespace nvdetect::detail
