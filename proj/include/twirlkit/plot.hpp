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

#include <optional>
#include <string>
#include <vector>

#include "twirlkit/fit.hpp"
#include "twirlkit/rb.hpp"

namespace twirlkit {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::optional<DecayFit> fit;
};

struct PlotFrame {
  double left = 70, top = 30, width = 560, height = 360;
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
};

/// Axis ranges covering every point and every fitted curve sample.
PlotFrame plot_frame(const std::vector<PlotSeries>& series);

/// Static SVG with decay points and fitted curves. Throws on empty input.
std::string emit_plot(const std::vector<PlotSeries>& series, const std::string& title = "");

std::vector<PlotSeries> plot_series(const RBResult& r);

}  // namespace twirlkit
