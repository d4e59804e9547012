// Copyright 2026 The qcal authors
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

#include <string>
#include <vector>

namespace qcal::detail {

struct Series {
  enum class Mode { points, line };
  std::string label;
  Mode mode = Mode::points;
  std::string color = "#1f77b4";
  double marker_radius = 2.5;
  std::vector<double> x, y;
};

struct Plot {
  std::string title;
  std::string x_label, y_label;
  std::vector<Series> series;
  int width = 720;
  int height = 480;
};

/// Deterministic standalone SVG: scatter/line series, axes, ticks, legend.
std::string render_svg(const Plot& plot);

}  // namespace qcal::detail
