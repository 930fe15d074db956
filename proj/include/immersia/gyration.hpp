#pragma once

#include <span>
#include <string>
#include <vector>

#include "immersia/geometry.hpp"

namespace immersia {

// Polygons whose shoelace area falls at or below this (squared channel units)
// collapse to a point circle at the vertex centroid.
inline constexpr double kDegenerateArea = 1e-12;
// Two point circles closer than this count as coincident.
inline constexpr double kCoincidentCenters = 1e-12;

// Submetric values placed on n evenly spaced radar axes. Axis i (zero-based)
// sits at angle 2*pi*i/n; vertex i = value_i * (cos, sin) of that angle.
class RadarPolygon {
 public:
  // Throws InsufficientDataError for n < 3 and ArgumentError for negative or
  // non-finite values.
  explicit RadarPolygon(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<Point2>& vertices() const noexcept { return vertices_; }
  double axis_angle(std::size_t i) const noexcept;

 private:
  std::vector<double> values_;
  std::vector<Point2> vertices_;
};

inline RadarPolygon radar_polygon(std::vector<double> values) { return RadarPolygon(std::move(values)); }

// Arithmetic mean of the vertices (unit point masses), not the area centroid.
Point2 vertex_centroid(const RadarPolygon& poly);

// Sum of squared vertex distances to `centroid`.
double vertex_moment(const RadarPolygon& poly, Point2 centroid);

double shoelace_area(const RadarPolygon& poly);

struct GyrationCircle {
  Point2 center;
  double radius = 0.0;
  std::string label;
  // Intermediate quantities kept for reporting.
  double moment = 0.0;
  double area = 0.0;
  bool degenerate = false;
};

// Circle at the vertex centroid with radius sqrt(I / A); a point circle when
// A <= kDegenerateArea.
GyrationCircle gyration_circle(const RadarPolygon& poly, std::string label = {});

// Lens area of two circles: 0 when separate, the smaller disc when one
// contains the other.
double circle_intersection_area(Point2 c1, double r1, Point2 c2, double r2);

inline double circle_intersection_area(const GyrationCircle& a, const GyrationCircle& b) {
  return circle_intersection_area(a.center, a.radius, b.center, b.radius);
}

struct ImmersionResult {
  double center_distance = 0.0;
  double intersection_area = 0.0;
  double union_area = 0.0;
  double index_percent = 0.0;
  bool degenerate = false;
};

// Intersection-over-union of the two circles in percent, within [0, 100].
ImmersionResult compare_circles(const GyrationCircle& test, const GyrationCircle& reference);

inline double immersion_index(const GyrationCircle& test, const GyrationCircle& reference) {
  return compare_circles(test, reference).index_percent;
}

}  // namespace immersia
