#pragma once

#include <string>
#include <vector>

#include "immersia/gyration.hpp"

namespace immersia {

struct RadarSeries {
  std::string label;
  RadarPolygon polygon;
  GyrationCircle circle;
};

// Radar chart with each condition's polygon and gyration circle overlaid.
std::string render_radar_svg(const std::vector<std::string>& axis_labels, const std::vector<RadarSeries>& series);

struct PlotSeries {
  std::string label;
  std::vector<double> t;
  std::vector<double> y;
};

// Line plot sharing one time axis (reference vs measured style).
std::string render_timeseries_svg(const std::string& title, const std::string& y_label,
                                  const std::vector<PlotSeries>& series);

}  // namespace immersia
