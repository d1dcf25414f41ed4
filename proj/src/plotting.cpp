// Copyright 2026 The robustlimit Authors
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

#include "robustlimit/plotting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "robustlimit/errors.hpp"

namespace robustlimit {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#17becf", "#8c564b", "#000000"};

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

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  double value(double v) const { return log ? std::log10(v) : v; }
  double frac(double v) const { return (value(v) - lo) / (hi - lo); }
};

Axis fit_axis(const std::vector<double>& vals, bool log) {
  Axis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : vals) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, a.value(v));
    hi = std::max(hi, a.value(v));
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (log) {
    lo = std::floor(lo);
    hi = std::ceil(hi);
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  } else if (!log) {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  a.lo = lo;
  a.hi = hi;
  return a;
}

std::vector<double> linear_ticks(double lo, double hi) {
  const double raw = (hi - lo) / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
    out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return out;
}

}  // namespace

std::string render_svg(const PlotSpec& plot) {
  std::vector<double> xs;
  std::vector<double> ys;
  auto clamp_y = [&](double y) { return plot.log_y ? std::max(y, plot.log_floor) : y; };
  for (const auto& s : plot.series) {
    if (s.x.size() != s.y.size()) {
      throw Error(ErrorKind::DimensionMismatch, "series '" + s.label + "' has ragged data");
    }
    xs.insert(xs.end(), s.x.begin(), s.x.end());
    for (double y : s.y) ys.push_back(clamp_y(y));
  }
  const Axis ax = fit_axis(xs, false);
  const Axis ay = fit_axis(ys, plot.log_y);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + ax.frac(x) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - ay.frac(clamp_y(y))) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << escape(plot.title) << "</text>\n";

  // Grid and tick labels.
  for (double t : linear_ticks(ax.lo, ax.hi)) {
    const double x = px(t);
    o << "<line x1=\"" << num(x) << "\" y1=\"" << kTop << "\" x2=\"" << num(x) << "\" y2=\""
      << kTop + ph << "\" stroke=\"#e0e0e0\"/>\n";
    o << "<text x=\"" << num(x) << "\" y=\"" << kTop + ph + 18
      << "\" text-anchor=\"middle\">" << num(t) << "</text>\n";
  }
  std::vector<double> yticks;
  if (plot.log_y) {
    const int step = std::max(1, static_cast<int>(std::ceil((ay.hi - ay.lo) / 8.0)));
    for (int e = static_cast<int>(ay.lo); e <= static_cast<int>(ay.hi); e += step) {
      yticks.push_back(std::pow(10.0, e));
    }
  } else {
    yticks = linear_ticks(ay.lo, ay.hi);
  }
  for (double t : yticks) {
    const double y = py(t);
    o << "<line x1=\"" << kLeft << "\" y1=\"" << num(y) << "\" x2=\"" << kLeft + pw << "\" y2=\""
      << num(y) << "\" stroke=\"#e0e0e0\"/>\n";
    std::string label = num(t);
    if (plot.log_y) label = "1e" + std::to_string(static_cast<int>(std::lround(std::log10(t))));
    o << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">"
      << label << "</text>\n";
  }
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16
    << "\" text-anchor=\"middle\">" << escape(plot.x_label) << "</text>\n";
  o << "<text transform=\"translate(22," << kTop + ph / 2
    << ") rotate(-90)\" text-anchor=\"middle\">" << escape(plot.y_label) << "</text>\n";

  for (std::size_t i = 0; i < plot.series.size(); ++i) {
    const auto& s = plot.series[i];
    const std::string color =
        s.color.empty() ? kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))] : s.color;
    if (s.style == SeriesStyle::Points) {
      for (std::size_t k = 0; k < s.x.size(); ++k) {
        o << "<circle cx=\"" << num(px(s.x[k])) << "\" cy=\"" << num(py(s.y[k]))
          << "\" r=\"2.2\" fill=\"" << color << "\" fill-opacity=\"0.6\"/>\n";
      }
    } else if (!s.x.empty()) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
      for (std::size_t k = 0; k < s.x.size(); ++k) {
        if (s.style == SeriesStyle::Steps && k > 0) {
          o << num(px(s.x[k])) << ',' << num(py(s.y[k - 1])) << ' ';
        }
        o << num(px(s.x[k])) << ',' << num(py(s.y[k])) << ' ';
      }
      o << "\"/>\n";
    }
    const double ly = kTop + 14 + 18.0 * static_cast<double>(i);
    o << "<rect x=\"" << kLeft + pw + 12 << "\" y=\"" << ly - 9 << "\" width=\"12\" height=\"12\" fill=\""
      << color << "\"/>\n";
    o << "<text x=\"" << kLeft + pw + 30 << "\" y=\"" << ly + 1 << "\">" << escape(s.label)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_svg(const PlotSpec& plot, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::ParseError, "cannot open " + path + " for writing");
  f << render_svg(plot);
}

}  // namespace robustlimit
