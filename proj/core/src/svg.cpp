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

#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "util.hpp"

namespace qcal::detail {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Range {
  double lo = 0.0, hi = 1.0;
};

Range data_range(const Plot& plot, bool use_x) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : plot.series) {
    const auto& v = use_x ? s.x : s.y;
    for (double e : v) {
      if (!std::isfinite(e)) continue;
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
  }
  if (!(lo <= hi)) return {0.0, 1.0};
  if (lo == hi) {
    double pad = lo == 0.0 ? 1.0 : std::fabs(lo) * 0.1;
    return {lo - pad, hi + pad};
  }
  double pad = (hi - lo) * 0.05;
  return {lo - pad, hi + pad};
}

std::vector<double> nice_ticks(const Range& r, int target = 6) {
  double span = r.hi - r.lo;
  double raw = span / target;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double norm = raw / mag;
  double step = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  step *= mag;
  std::vector<double> ticks;
  double first = std::ceil(r.lo / step) * step;
  for (double t = first; t <= r.hi + step * 1e-9; t += step) {
    double v = t;
    if (std::fabs(v) < step * 1e-9) v = 0.0;
    ticks.push_back(v);
  }
  return ticks;
}

}  // namespace

std::string render_svg(const Plot& plot) {
  const double ml = 76, mr = 18, mt = 34, mb = 50;
  const double w = plot.width, h = plot.height;
  const double pw = w - ml - mr, ph = h - mt - mb;

  Range xr = data_range(plot, true);
  Range yr = data_range(plot, false);
  auto px = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return mt + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width
      << "\" height=\"" << plot.height << "\" viewBox=\"0 0 " << plot.width
      << " " << plot.height << "\">\n";
  svg << "<rect width=\"" << plot.width << "\" height=\"" << plot.height
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fmt(w / 2) << "\" y=\"20\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">"
      << html_escape(plot.title) << "</text>\n";

  // Grid and ticks.
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">\n";
  for (double t : nice_ticks(xr)) {
    double x = px(t);
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(mt) << "\" x2=\""
        << fmt(x) << "\" y2=\"" << fmt(mt + ph)
        << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(mt + ph + 16)
        << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  for (double t : nice_ticks(yr)) {
    double y = py(t);
    svg << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(y) << "\" x2=\""
        << fmt(ml + pw) << "\" y2=\"" << fmt(y)
        << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << fmt(ml - 6) << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
  }
  svg << "</g>\n";

  // Axes.
  svg << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\""
      << fmt(pw) << "\" height=\"" << fmt(ph)
      << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  svg << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(h - 10)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">"
      << html_escape(plot.x_label) << "</text>\n";
  svg << "<text x=\"16\" y=\"" << fmt(mt + ph / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 "
      << fmt(mt + ph / 2) << ")\">" << html_escape(plot.y_label)
      << "</text>\n";

  // Series.
  for (const auto& s : plot.series) {
    if (s.mode == Series::Mode::line) {
      svg << "<polyline fill=\"none\" stroke=\"" << s.color
          << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (i) svg << ' ';
        svg << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i]));
      }
      svg << "\"/>\n";
    } else {
      svg << "<g fill=\"" << s.color << "\" fill-opacity=\"0.75\">\n";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        svg << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\""
            << fmt(py(s.y[i])) << "\" r=\"" << fmt(s.marker_radius)
            << "\"/>\n";
      svg << "</g>\n";
    }
  }

  // Legend (only when labels are present).
  double ly = mt + 8;
  for (const auto& s : plot.series) {
    if (s.label.empty()) continue;
    svg << "<rect x=\"" << fmt(ml + pw - 150) << "\" y=\"" << fmt(ly)
        << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>\n";
    svg << "<text x=\"" << fmt(ml + pw - 136) << "\" y=\"" << fmt(ly + 9)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">"
        << html_escape(s.label) << "</text>\n";
    ly += 16;
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace qcal::detail
