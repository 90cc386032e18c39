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

#include "twirlkit/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "twirlkit/errors.hpp"

namespace twirlkit {

namespace {

constexpr int kCurveSamples = 120;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                   "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

double curve(const DecayFit& f, double x) { return f.A * std::pow(f.lambda, x) + f.B; }

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double px(const PlotFrame& f, double x) {
  return f.left + (x - f.x_min) / (f.x_max - f.x_min) * f.width;
}
double py(const PlotFrame& f, double y) {
  return f.top + (f.y_max - y) / (f.y_max - f.y_min) * f.height;
}

}  // namespace

PlotFrame plot_frame(const std::vector<PlotSeries>& series) {
  if (series.empty()) throw Error(ErrorKind::InvalidArgument, "nothing to plot");
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size() || s.x.empty())
      throw Error(ErrorKind::DimensionMismatch, "series '" + s.label + "' has mismatched data");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
        throw Error(ErrorKind::InvalidArgument, "non-finite plot data");
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  for (const auto& s : series) {
    if (!s.fit) continue;
    for (int k = 0; k <= kCurveSamples; ++k) {
      const double y = curve(*s.fit, x0 + (x1 - x0) * k / kCurveSamples);
      if (std::isfinite(y)) {
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
    }
  }
  if (x1 - x0 < 1e-12) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (y1 - y0 < 1e-12) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  PlotFrame f;
  const double dx = 0.04 * (x1 - x0), dy = 0.06 * (y1 - y0);
  f.x_min = x0 - dx;
  f.x_max = x1 + dx;
  f.y_min = y0 - dy;
  f.y_max = y1 + dy;
  return f;
}

std::string emit_plot(const std::vector<PlotSeries>& series, const std::string& title) {
  const PlotFrame f = plot_frame(series);
  const double legend_w = 170;
  const double w = f.left + f.width + legend_w, h = f.top + f.height + 50;
  std::string out = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.0f} {:.0f}\">\n",
      w, h, w, h);
  out += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    out += fmt::format("<text x=\"{:.1f}\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n",
                       f.left, escape(title));
  out += fmt::format(
      "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      f.left, f.top, f.width, f.height);
  for (int t = 0; t <= 5; ++t) {
    const double xv = f.x_min + (f.x_max - f.x_min) * t / 5.0;
    const double yv = f.y_min + (f.y_max - f.y_min) * t / 5.0;
    out += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"10\" "
        "text-anchor=\"middle\">{:.3g}</text>\n",
        px(f, xv), f.top + f.height + 15, xv);
    out += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"10\" "
        "text-anchor=\"end\">{:.4g}</text>\n",
        f.left - 6, py(f, yv) + 3, yv);
  }
  out += fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"12\" "
      "text-anchor=\"middle\">depth</text>\n",
      f.left + f.width / 2, f.top + f.height + 35);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kColors[i % std::size(kColors)];
    out += fmt::format("<g class=\"series\" data-label=\"{}\">\n", escape(s.label));
    for (std::size_t k = 0; k < s.x.size(); ++k)
      out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n",
                         px(f, s.x[k]), py(f, s.y[k]), color);
    if (s.fit) {
      const double a = *std::min_element(s.x.begin(), s.x.end());
      const double b = *std::max_element(s.x.begin(), s.x.end());
      out += "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"";
      out += color;
      out += "\" points=\"";
      for (int k = 0; k <= kCurveSamples; ++k) {
        const double xv = a + (b - a) * k / kCurveSamples;
        const double yv = curve(*s.fit, xv);
        if (!std::isfinite(yv)) continue;
        out += fmt::format("{:.2f},{:.2f} ", px(f, xv), py(f, yv));
      }
      out += "\"/>\n";
    }
    out += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"10\" "
        "fill=\"{}\">{}</text>\n",
        f.left + f.width + 10, f.top + 12 + 13.0 * i, color, escape(s.label));
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

std::vector<PlotSeries> plot_series(const RBResult& r) {
  std::vector<PlotSeries> out;
  for (const auto* group : {&r.z, &r.x})
    for (const auto& s : *group) {
      PlotSeries p;
      p.label = std::string(to_string(r.procedure)) + " " + s.label;
      for (std::size_t i = 0; i < r.depths.size(); ++i) {
        p.x.push_back(r.depths[i]);
        p.y.push_back(s.mean[i]);
      }
      if (s.fit.ok) p.fit = s.fit;
      out.push_back(std::move(p));
    }
  return out;
}

}  // namespace twirlkit
