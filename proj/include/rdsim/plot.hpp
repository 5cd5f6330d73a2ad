#pragma once

// Bare SVG line charts: axes, ticks, one polyline per series, a legend.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rdsim {

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

namespace detail {

inline std::string svg_escape(const std::string& s) {
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

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::fabs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

// Roughly five ticks at 1/2/5 multiples of a power of ten.
inline std::vector<double> nice_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * step; t += step)
    ticks.push_back(t);
  return ticks;
}

}  // namespace detail

/// Renders the plot. Throws if there are no series or a series is empty.
inline std::string render_svg(const LinePlot& plot) {
  if (plot.series.empty()) throw std::invalid_argument("plot '" + plot.title + "' has no series");
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : plot.series) {
    if (s.points.empty()) throw std::invalid_argument("series '" + s.name + "' is empty");
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y))
        throw std::invalid_argument("series '" + s.name + "' has a non-finite point");
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (x1 - x0 <= 0.0) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 <= 0.0) { y0 -= 0.5; y1 += 0.5; }
  y0 = std::min(y0, 0.0);
  const double pad = 0.05 * (y1 - y0);
  y1 += pad;

  const double width = 640, height = 420, left = 70, right = 170, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  using detail::svg_num;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << svg_num(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << detail::svg_escape(plot.title) << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\""
     << top + ph << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
     << "\" stroke=\"black\"/>\n";
  for (double t : detail::nice_ticks(x0, x1)) {
    os << "<line x1=\"" << svg_num(sx(t)) << "\" y1=\"" << top + ph << "\" x2=\"" << svg_num(sx(t))
       << "\" y2=\"" << top + ph + 5 << "\" stroke=\"black\"/>"
       << "<text x=\"" << svg_num(sx(t)) << "\" y=\"" << top + ph + 18
       << "\" text-anchor=\"middle\">" << detail::tick_label(t) << "</text>\n";
  }
  for (double t : detail::nice_ticks(y0, y1)) {
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << svg_num(sy(t)) << "\" x2=\"" << left
       << "\" y2=\"" << svg_num(sy(t)) << "\" stroke=\"black\"/>"
       << "<text x=\"" << left - 8 << "\" y=\"" << svg_num(sy(t) + 4)
       << "\" text-anchor=\"end\">" << detail::tick_label(t) << "</text>\n";
  }
  os << "<text x=\"" << svg_num(left + pw / 2) << "\" y=\"" << height - 15
     << "\" text-anchor=\"middle\">" << detail::svg_escape(plot.x_label) << "</text>\n";
  os << "<text transform=\"translate(18," << svg_num(top + ph / 2)
     << ") rotate(-90)\" text-anchor=\"middle\">" << detail::svg_escape(plot.y_label) << "</text>\n";

  for (std::size_t i = 0; i < plot.series.size(); ++i) {
    const auto& s = plot.series[i];
    const char* colour = palette[i % std::size(palette)];
    auto pts = s.points;
    std::sort(pts.begin(), pts.end());
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (std::size_t j = 0; j < pts.size(); ++j)
      os << (j ? " " : "") << svg_num(sx(pts[j].first)) << ',' << svg_num(sy(pts[j].second));
    os << "\"/>\n";
    const double ly = top + 10 + 18.0 * static_cast<double>(i);
    os << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << svg_num(ly) << "\" x2=\""
       << left + pw + 35 << "\" y2=\"" << svg_num(ly) << "\" stroke=\"" << colour
       << "\" stroke-width=\"2\"/><text x=\"" << left + pw + 40 << "\" y=\"" << svg_num(ly + 4)
       << "\">" << detail::svg_escape(s.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/// Writes the plot to `path`. Nothing is written when rendering fails.
inline void write_svg(const LinePlot& plot, const std::string& path) {
  const std::string svg = render_svg(plot);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << svg;
}

}  // namespace rdsim
