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

#include "twirlkit/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "twirlkit/errors.hpp"

namespace twirlkit {

namespace {

struct Params {
  double a, lambda, b;
};

double clamp_lambda(double l) { return std::clamp(l, 1e-12, kLambdaMax); }

double sse(std::span<const DecayPoint> pts, const Params& p) {
  double s = 0.0;
  for (const auto& q : pts) {
    double r = p.a * std::pow(p.lambda, q.depth) + p.b - q.value;
    s += r * r;
  }
  return s;
}

// Log-linear regression of log(y - b); nullopt-like failure flagged by ok.
bool log_linear(std::span<const DecayPoint> pts, double b, Params& out) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& q : pts) {
    double y = q.value - b;
    if (!(y > 0.0)) continue;
    double ly = std::log(y);
    sx += q.depth;
    sy += ly;
    sxx += q.depth * q.depth;
    sxy += q.depth * ly;
    ++count;
  }
  if (count < 2) return false;
  double den = count * sxx - sx * sx;
  if (std::abs(den) < 1e-300) return false;
  double slope = (count * sxy - sx * sy) / den;
  double icept = (sy - slope * sx) / count;
  out = Params{std::exp(icept), clamp_lambda(std::exp(slope)), b};
  return std::isfinite(out.a);
}

}  // namespace

DecayFit fit_exponential(std::span<const DecayPoint> points, bool with_offset) {
  const std::size_t need = with_offset ? 4 : 3;
  if (points.size() < need)
    throw Error(ErrorKind::InvalidArgument,
                "fit needs at least " + std::to_string(need) + " points");
  for (const auto& q : points)
    if (!std::isfinite(q.value) || !std::isfinite(q.depth))
      throw Error(ErrorKind::InvalidArgument, "non-finite data point");

  // Flat data carry no decay; the offset model is degenerate there.
  double lo = points.front().value, hi = lo, mean = 0.0;
  for (const auto& q : points) {
    lo = std::min(lo, q.value);
    hi = std::max(hi, q.value);
    mean += q.value;
  }
  mean /= static_cast<double>(points.size());
  if (hi - lo <= 1e-13 * std::max(1.0, std::abs(mean))) {
    DecayFit flat;
    flat.A = mean;
    flat.lambda = 1.0;
    flat.residual = sse(points, Params{mean, 1.0, 0.0});
    return flat;
  }

  Params p{1.0, 0.9, 0.0};
  double best = std::numeric_limits<double>::infinity();
  if (!with_offset) {
    if (!log_linear(points, 0.0, p)) {
      double y0 = points.front().value;
      p = Params{y0 / std::pow(0.9, points.front().depth), 0.9, 0.0};
    }
    best = sse(points, p);
  } else {
    // Asymptote candidates below the smallest value.
    const double span = std::max(hi - lo, 1e-12);
    for (double f : {1e-4, 1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3, 1.0, 3.0, 10.0}) {
      Params cand;
      if (!log_linear(points, lo - f * span, cand)) continue;
      double s = sse(points, cand);
      if (s < best) {
        best = s;
        p = cand;
      }
    }
    if (!std::isfinite(best)) {
      p = Params{hi - lo, 0.9, lo};
      best = sse(points, p);
    }
  }

  const int np = with_offset ? 3 : 2;
  double mu = 1e-3;
  int stale = 0;
  int iter = 0;
  for (; iter < 1000; ++iter) {
    Eigen::MatrixXd j(points.size(), np);
    Eigen::VectorXd r(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double m = points[i].depth;
      const double lm = std::pow(p.lambda, m);
      j(i, 0) = lm;
      j(i, 1) = m == 0.0 ? 0.0 : p.a * m * std::pow(p.lambda, m - 1.0);
      if (with_offset) j(i, 2) = 1.0;
      r(i) = p.a * lm + p.b - points[i].value;
    }
    Eigen::MatrixXd jtj = j.transpose() * j;
    Eigen::VectorXd g = j.transpose() * r;
    if (g.norm() <= 1e-15 * std::max(1.0, std::sqrt(best))) break;
    Eigen::MatrixXd lhs = jtj;
    lhs.diagonal() += mu * jtj.diagonal().cwiseMax(1e-12);
    Eigen::VectorXd step = lhs.ldlt().solve(-g);
    Params trial{p.a + step(0), clamp_lambda(p.lambda + step(1)),
                 with_offset ? p.b + step(2) : 0.0};
    double s = sse(points, trial);
    const double scale = std::abs(p.a) + std::abs(p.lambda) + std::abs(p.b);
    if (std::isfinite(s) && s < best) {
      const double gain = best - s;
      p = trial;
      best = s;
      mu = std::max(mu / 3.0, 1e-12);
      stale = 0;
      if (gain <= 1e-15 * std::max(best, 1e-300) || step.norm() <= 1e-14 * scale) break;
    } else {
      mu *= 4.0;
      if (step.norm() <= 1e-14 * scale || mu > 1e16) break;
      if (++stale >= 50)
        throw Error(ErrorKind::FitDiverged, "residual did not decrease for 50 iterations");
    }
  }
  if (!std::isfinite(best) || !std::isfinite(p.a))
    throw Error(ErrorKind::FitDiverged, "fit produced non-finite parameters");
  DecayFit fit;
  fit.A = p.a;
  fit.lambda = p.lambda;
  fit.B = p.b;
  fit.residual = best;
  fit.iterations = iter;
  return fit;
}

}  // namespace twirlkit
