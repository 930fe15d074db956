#include "immersia/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace immersia {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

const char* color(std::size_t i) { return kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))]; }

}  // namespace

std::string render_radar_svg(const std::vector<std::string>& axis_labels, const std::vector<RadarSeries>& series) {
  constexpr double size = 640.0, cx = 320.0, cy = 320.0, span = 240.0;
  double extent = 0.0;
  for (const auto& s : series) {
    for (double v : s.polygon.values()) extent = std::max(extent, v);
    extent = std::max(extent, std::hypot(s.circle.center.x, s.circle.center.y) + s.circle.radius);
  }
  if (extent <= 0.0) extent = 1.0;
  const double k = span / extent;
  auto px = [&](Point2 p) { return num(cx + k * p.x) + "," + num(cy - k * p.y); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(size) + "\" height=\"" + num(size) +
         "\" viewBox=\"0 0 640 640\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const std::size_t n = axis_labels.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    const Point2 tip{extent * std::cos(theta), extent * std::sin(theta)};
    out += "<line x1=\"" + num(cx) + "\" y1=\"" + num(cy) + "\" x2=\"" + num(cx + k * tip.x) + "\" y2=\"" +
           num(cy - k * tip.y) + "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    const Point2 label{1.08 * tip.x, 1.08 * tip.y};
    out += "<text x=\"" + num(cx + k * label.x) + "\" y=\"" + num(cy - k * label.y) +
           "\" text-anchor=\"middle\">" + escape(axis_labels[i]) + "</text>\n";
  }

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    std::string pts;
    for (const auto& v : ser.polygon.vertices()) {
      if (!pts.empty()) pts += ' ';
      pts += px(v);
    }
    out += "<polygon points=\"" + pts + "\" fill=\"" + color(s) + "\" fill-opacity=\"0.15\" stroke=\"" + color(s) +
           "\" stroke-width=\"2\"/>\n";
    out += "<circle cx=\"" + num(cx + k * ser.circle.center.x) + "\" cy=\"" + num(cy - k * ser.circle.center.y) +
           "\" r=\"" + num(k * ser.circle.radius) + "\" fill=\"none\" stroke=\"" + color(s) +
           "\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
    out += "<circle cx=\"" + num(cx + k * ser.circle.center.x) + "\" cy=\"" + num(cy - k * ser.circle.center.y) +
           "\" r=\"3\" fill=\"" + color(s) + "\"/>\n";
    out += "<text x=\"16\" y=\"" + num(24.0 + 18.0 * static_cast<double>(s)) + "\" fill=\"" + color(s) + "\">" +
           escape(ser.label) + " (r=" + num(ser.circle.radius) + ")</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render_timeseries_svg(const std::string& title, const std::string& y_label,
                                  const std::vector<PlotSeries>& series) {
  constexpr double width = 900.0, height = 360.0, left = 70.0, right = 20.0, top = 40.0, bottom = 40.0;
  double tmin = 0.0, tmax = 1.0, ymin = -1.0, ymax = 1.0;
  bool first = true;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.t.size() && i < s.y.size(); ++i) {
      if (first) {
        tmin = tmax = s.t[i];
        ymin = ymax = s.y[i];
        first = false;
      }
      tmin = std::min(tmin, s.t[i]);
      tmax = std::max(tmax, s.t[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (tmax <= tmin) tmax = tmin + 1.0;
  if (ymax <= ymin) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const double pw = width - left - right, ph = height - top - bottom;
  auto sx = [&](double t) { return left + pw * (t - tmin) / (tmax - tmin); };
  auto sy = [&](double y) { return top + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"360\" viewBox=\"0 0 900 360\" "
         "font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(width / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
         "</text>\n";
  out += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"#333\"/>\n";
  out += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(height - 8) + "\" text-anchor=\"middle\">t [s] (" +
         num(tmin) + " .. " + num(tmax) + ")</text>\n";
  out += "<text x=\"14\" y=\"" + num(top + ph / 2) + "\" transform=\"rotate(-90 14 " + num(top + ph / 2) +
         ")\" text-anchor=\"middle\">" + escape(y_label) + " (" + num(ymin) + " .. " + num(ymax) + ")</text>\n";
  if (ymin < 0.0 && ymax > 0.0) {
    out += "<line x1=\"" + num(left) + "\" y1=\"" + num(sy(0.0)) + "\" x2=\"" + num(left + pw) + "\" y2=\"" +
           num(sy(0.0)) + "\" stroke=\"#ccc\"/>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    std::string pts;
    for (std::size_t i = 0; i < ser.t.size() && i < ser.y.size(); ++i) {
      if (!pts.empty()) pts += ' ';
      pts += num(sx(ser.t[i])) + "," + num(sy(ser.y[i]));
    }
    out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color(s) + "\" stroke-width=\"1.2\"/>\n";
    out += "<text x=\"" + num(left + 10) + "\" y=\"" + num(top + 16 + 16.0 * static_cast<double>(s)) + "\" fill=\"" +
           color(s) + "\">" + escape(ser.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace immersia
