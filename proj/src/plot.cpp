#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hocs/bench.hpp"

namespace hocs {

namespace {

struct Series {
  std::string method;
  std::vector<double> x, y;
};

const char* color_for(const std::string& method) {
  if (method == "cs") return "#1f77b4";
  if (method == "hcs") return "#d62728";
  return "#2ca02c";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

void panel(std::string& svg, double ox, const char* title, bool log_y,
           const std::vector<Series>& series) {
  constexpr double kW = 320, kH = 260, kPad = 45;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Series& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = log_y ? std::log10(std::max(s.y[i], 1e-300)) : s.y[i];
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmin > xmax) return;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double yspan = ymax - ymin;
  ymin -= 0.05 * yspan;
  ymax += 0.05 * yspan;

  auto px = [&](double x) { return ox + kPad + (x - xmin) / (xmax - xmin) * (kW - 2 * kPad); };
  auto py = [&](double yraw) {
    const double y = log_y ? std::log10(std::max(yraw, 1e-300)) : yraw;
    return kH - kPad - (y - ymin) / (ymax - ymin) * (kH - 2 * kPad);
  };

  svg += "<rect x='" + fmt(ox + kPad) + "' y='" + fmt(kPad) + "' width='" + fmt(kW - 2 * kPad) +
         "' height='" + fmt(kH - 2 * kPad) + "' fill='none' stroke='#888'/>\n";
  svg += "<text x='" + fmt(ox + kW / 2) + "' y='20' text-anchor='middle' font-size='13'>" +
         title + (log_y ? " (log10)" : "") + "</text>\n";
  svg += "<text x='" + fmt(ox + kW / 2) + "' y='" + fmt(kH - 8) +
         "' text-anchor='middle' font-size='11'>compression ratio</text>\n";

  for (const Series& s : series) {
    if (s.x.empty()) continue;
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i)
      pts += fmt(px(s.x[i])) + "," + fmt(py(s.y[i])) + " ";
    svg += "<polyline points='" + pts + "' fill='none' stroke='" + color_for(s.method) +
           "' stroke-width='1.5'/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      svg += "<circle cx='" + fmt(px(s.x[i])) + "' cy='" + fmt(py(s.y[i])) +
             "' r='3' fill='" + color_for(s.method) + "'/>\n";
  }
}

}  // namespace

void render_plot_svg(const std::string& path, std::span<const ExperimentRow> rows) {
  auto collect = [&](auto value_of) {
    std::map<std::string, Series> by_method;
    for (const ExperimentRow& r : rows) {
      Series& s = by_method[r.method];
      s.method = r.method;
      s.x.push_back(r.compression_ratio);
      s.y.push_back(value_of(r));
    }
    std::vector<Series> out;
    for (auto& [_, s] : by_method) out.push_back(std::move(s));
    return out;
  };

  const auto err = collect([](const ExperimentRow& r) { return r.relative_error; });
  const auto time = collect(
      [](const ExperimentRow& r) { return double(r.compress_time_ns + r.recover_time_ns); });
  const auto mem = collect(
      [](const ExperimentRow& r) { return double(r.hash_entries + r.output_entries); });

  std::string svg =
      "<svg xmlns='http://www.w3.org/2000/svg' width='960' height='300' "
      "font-family='sans-serif'>\n<rect width='960' height='300' fill='white'/>\n";
  panel(svg, 0, "relative error", false, err);
  panel(svg, 320, "time [ns]", true, time);
  panel(svg, 640, "memory [entries]", true, mem);

  double lx = 50;
  for (const auto& s : err) {
    svg += "<rect x='" + fmt(lx) + "' y='270' width='10' height='10' fill='" +
           color_for(s.method) + "'/>\n<text x='" + fmt(lx + 14) +
           "' y='279' font-size='11'>" + s.method + "</text>\n";
    lx += 120;
  }
  svg += "</svg>\n";

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open plot file: " + path);
  f << svg;
}

}  // namespace hocs
