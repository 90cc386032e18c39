// Copyright 2026 The twirlkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <string>
#include <vector>

namespace twirlkit {

struct DecayPoint {
  double depth = 0.0;
  double value = 0.0;
};

struct DecayFit {
  double A = 0.0;
  double lambda = 0.0;
  double B = 0.0;  ///< 0 when fitted without offset
  double residual = 0.0;  ///< sum of squared residuals
  std::string observable;
  int iterations = 0;
  bool ok = true;
};

inline constexpr double kLambdaMax = 1.05;

/**
 * Least-squares fit of A lambda^m (+ B). Log-linear start, then damped
 * Gauss-Newton (Levenberg-Marquardt). Uniform weights across depths.
 * Throws FitDiverged after 50 consecutive non-improving iterations
 * that have not converged.
 */
DecayFit fit_exponential(std::span<const DecayPoint> points, bool with_offset);

}  // namespace twirlkit
