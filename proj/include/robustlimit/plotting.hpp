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

#pragma once

// Minimal self-contained SVG line/scatter plots.

#include <string>
#include <vector>

namespace robustlimit {

enum class SeriesStyle { Line, Points, Steps };

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  SeriesStyle style = SeriesStyle::Line;
  std::string color;  // empty picks from the default palette
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = true;
  /// Values below this are drawn at the floor on log axes.
  double log_floor = 1e-12;
  std::vector<Series> series;
};

std::string render_svg(const PlotSpec& plot);
void write_svg(const PlotSpec& plot, const std::string& path);

}  // namespace robustlimit
