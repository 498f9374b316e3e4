#include "matraj/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>

namespace matraj {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#e377c2"};
constexpr int kPaletteSize = 8;

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// Maps data coordinates into a pixel viewport (y flipped).
struct Mapper {
  double x0, x1, y0, y1;  // data range
  double px, py, pw, ph;  // pixel viewport

  double x(double v) const { return px + (v - x0) / (x1 - x0) * pw; }
  double y(double v) const { return py + ph - (v - y0) / (y1 - y0) * ph; }
};

std::string polyline(const Mapper& map, const std::vector<std::pair<double, double>>& pts,
                     const char* color, double width, const char* dash = nullptr) {
  std::string d;
  for (const auto& [vx, vy] : pts) d += fmt("%.2f,%.2f ", map.x(vx), map.y(vy));
  std::string out = fmt("<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"%.2f\"",
                        color, width);
  if (dash) out += fmt(" stroke-dasharray=\"%s\"", dash);
  out += " points=\"" + d + "\"/>\n";
  return out;
}

std::string text_at(double x, double y, const std::string& s, const char* color,
                    int size = 12, const char* anchor = "middle") {
  return fmt("<text x=\"%.2f\" y=\"%.2f\" font-size=\"%d\" text-anchor=\"%s\" "
             "fill=\"%s\" font-family=\"sans-serif\">%s</text>\n",
             x, y, size, anchor, color, s.c_str());
}

std::string svg_open(double w, double h) {
  return fmt("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
             "viewBox=\"0 0 %.0f %.0f\">\n<rect width=\"100%%\" height=\"100%%\" "
             "fill=\"white\"/>\n",
             w, h, w, h);
}

std::string axis_ticks(const Mapper& map, int n_ticks, const char* x_label,
                       const char* y_label) {
  std::string out;
  out += fmt("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
             map.px, map.py + map.ph, map.px + map.pw, map.py + map.ph);
  out += fmt("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
             map.px, map.py, map.px, map.py + map.ph);
  for (int i = 0; i <= n_ticks; ++i) {
    const double fx = map.x0 + (map.x1 - map.x0) * i / n_ticks;
    const double fy = map.y0 + (map.y1 - map.y0) * i / n_ticks;
    out += text_at(map.x(fx), map.py + map.ph + 16, fmt("%.3g", fx), "black", 10);
    out += text_at(map.px - 8, map.y(fy) + 4, fmt("%.3g", fy), "black", 10, "end");
  }
  out += text_at(map.px + map.pw / 2, map.py + map.ph + 34, x_label, "black");
  out += fmt("<text x=\"14\" y=\"%.2f\" font-size=\"12\" text-anchor=\"middle\" "
             "fill=\"black\" font-family=\"sans-serif\" transform=\"rotate(-90 14 "
             "%.2f)\">%s</text>\n",
             map.py + map.ph / 2, map.py + map.ph / 2, y_label);
  return out;
}

}  // namespace

std::string trajectory_svg(const Scenario& s, const Trajectory& t, const Assignment& a) {
  const double size = 480.0, margin = 50.0;
  const Mapper map{s.region.lo.x, s.region.hi.x, s.region.lo.y, s.region.hi.y,
                   margin,        margin,        size - 2 * margin, size - 2 * margin};
  std::string out = svg_open(size, size);
  out += fmt("<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" "
             "stroke=\"black\" stroke-width=\"1.5\" class=\"region\"/>\n",
             map.x(s.region.lo.x), map.y(s.region.hi.y),
             map.x(s.region.hi.x) - map.x(s.region.lo.x),
             map.y(s.region.lo.y) - map.y(s.region.hi.y));

  for (int m = 0; m < t.m_count(); ++m) {
    const char* color = kPalette[m % kPaletteSize];
    std::vector<std::pair<double, double>> pts;
    pts.reserve(t.positions[m].size());
    for (const Point2& p : t.positions[m]) pts.push_back({p.x, p.y});
    out += polyline(map, pts, color, 1.6);
  }
  for (int m = 0; m < s.m_count; ++m) {
    const char* color = kPalette[m % kPaletteSize];
    const Point2 p = s.initial[m];
    out += fmt("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"%s\"/>\n", map.x(p.x),
               map.y(p.y), color);
    out += text_at(map.x(p.x) + 9, map.y(p.y) + 4, ma_label(m), color);
  }
  for (int j = 0; j < s.m_count; ++j) {
    // destination j is reached by the antenna assigned to it
    int owner = 0;
    for (int m = 0; m < s.m_count; ++m)
      if (a.dest_of[m] == j) owner = m;
    const char* color = kPalette[owner % kPaletteSize];
    const Point2 p = s.dest[j];
    out += fmt("<rect x=\"%.2f\" y=\"%.2f\" width=\"8\" height=\"8\" fill=\"none\" "
               "stroke=\"%s\" stroke-width=\"1.5\"/>\n",
               map.x(p.x) - 4, map.y(p.y) - 4, color);
    out += text_at(map.x(p.x) + 10, map.y(p.y) + 4, dest_label(j), color);
  }
  out += "</svg>\n";
  return out;
}

std::string speeds_svg(const std::vector<std::vector<double>>& speeds, double v_max) {
  const double w = 560.0, h = 380.0, ml = 60.0, mr = 20.0, mt = 20.0, mb = 50.0;
  const int n_slots = speeds.empty() ? 1 : static_cast<int>(speeds[0].size());
  double top = v_max;
  for (const auto& row : speeds)
    for (double v : row) top = std::max(top, v);
  const Mapper map{0.0, static_cast<double>(std::max(n_slots - 1, 1)), 0.0, top * 1.1,
                   ml,  mt, w - ml - mr, h - mt - mb};

  std::string out = svg_open(w, h);
  out += axis_ticks(map, 4, "time slot", "speed (lambda/ms)");
  out += polyline(map, {{0.0, v_max}, {static_cast<double>(n_slots - 1), v_max}},
                  "#555555", 1.0, "6,4");
  out += text_at(map.px + map.pw - 6, map.y(v_max) - 5, "v_max", "#555555", 11, "end");
  for (size_t m = 0; m < speeds.size(); ++m) {
    const char* color = kPalette[m % kPaletteSize];
    std::vector<std::pair<double, double>> pts;
    pts.reserve(speeds[m].size());
    for (int n = 0; n < static_cast<int>(speeds[m].size()); ++n)
      pts.push_back({static_cast<double>(n), speeds[m][n]});
    out += polyline(map, pts, color, 1.5);
    out += text_at(map.px + 16 + 34.0 * m, map.py + 12, ma_label(static_cast<int>(m)),
                   color);
  }
  out += "</svg>\n";
  return out;
}

std::string sweep_svg(const std::vector<SweepRow>& rows) {
  const double w = 560.0, h = 400.0, ml = 64.0, mr = 20.0, mt = 20.0, mb = 50.0;
  std::map<Scheme, std::vector<std::pair<double, double>>> series;
  double x0 = 0.0, x1 = 1.0, y1 = 0.0;
  bool first = true;
  for (const SweepRow& r : rows) {
    if (r.trials == 0) continue;
    series[r.scheme].push_back({r.v_max, r.mean_delay});
    if (first) {
      x0 = x1 = r.v_max;
      first = false;
    }
    x0 = std::min(x0, r.v_max);
    x1 = std::max(x1, r.v_max);
    y1 = std::max(y1, r.mean_delay);
  }
  if (x1 <= x0) x1 = x0 + 1.0;
  if (y1 <= 0.0) y1 = 1.0;
  const Mapper map{x0, x1, 0.0, y1 * 1.1, ml, mt, w - ml - mr, h - mt - mb};

  std::string out = svg_open(w, h);
  out += axis_ticks(map, 4, "v_max (lambda/ms)", "mean delay (ms)");
  int idx = 0;
  for (auto& [scheme, pts] : series) {
    const char* color = kPalette[idx % kPaletteSize];
    std::sort(pts.begin(), pts.end());
    out += polyline(map, pts, color, 1.6);
    for (const auto& [vx, vy] : pts) {
      switch (idx % 4) {
        case 0:
          out += fmt("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\" fill=\"%s\"/>\n",
                     map.x(vx), map.y(vy), color);
          break;
        case 1:
          out += fmt("<rect x=\"%.2f\" y=\"%.2f\" width=\"7\" height=\"7\" "
                     "fill=\"%s\"/>\n",
                     map.x(vx) - 3.5, map.y(vy) - 3.5, color);
          break;
        case 2:
          out += fmt("<path d=\"M %.2f %.2f l 4 7 l -8 0 z\" fill=\"%s\"/>\n",
                     map.x(vx), map.y(vy) - 4, color);
          break;
        default:
          out += fmt("<path d=\"M %.2f %.2f l 4 4 l -4 4 l -4 -4 z\" fill=\"%s\"/>\n",
                     map.x(vx), map.y(vy) - 4, color);
          break;
      }
    }
    out += text_at(map.px + map.pw - 8, map.py + 16 + 16.0 * idx, to_string(scheme),
                   color, 12, "end");
    ++idx;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace matraj
