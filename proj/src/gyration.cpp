#include "immersia/gyration.hpp"

#include <algorithm>
#include <cmath>

#include "immersia/error.hpp"

namespace immersia {

RadarPolygon::RadarPolygon(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 3) {
    throw InsufficientDataError("a radar polygon needs at least three submetrics");
  }
  vertices_.reserve(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v) || v < 0.0) throw ArgumentError("radar values must be finite and nonnegative");
    const double theta = axis_angle(i);
    vertices_.push_back({v * std::cos(theta), v * std::sin(theta)});
  }
}

double RadarPolygon::axis_angle(std::size_t i) const noexcept {
  return 2.0 * kPi * static_cast<double>(i) / static_cast<double>(values_.size());
}

Point2 vertex_centroid(const RadarPolygon& poly) {
  Point2 sum;
  for (const auto& v : poly.vertices()) sum = sum + v;
  const double n = static_cast<double>(poly.size());
  return {sum.x / n, sum.y / n};
}

double vertex_moment(const RadarPolygon& poly, Point2 centroid) {
  double moment = 0.0;
  for (const auto& v : poly.vertices()) {
    const double dx = v.x - centroid.x;
    const double dy = v.y - centroid.y;
    moment += dx * dx + dy * dy;
  }
  return moment;
}

double shoelace_area(const RadarPolygon& poly) {
  const auto& v = poly.vertices();
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * std::abs(twice);
}

GyrationCircle gyration_circle(const RadarPolygon& poly, std::string label) {
  GyrationCircle c;
  c.label = std::move(label);
  c.center = vertex_centroid(poly);
  c.moment = vertex_moment(poly, c.center);
  c.area = shoelace_area(poly);
  if (c.area <= kDegenerateArea) {
    c.degenerate = true;
    c.radius = 0.0;
  } else {
    c.radius = std::sqrt(c.moment / c.area);
  }
  return c;
}

double circle_intersection_area(Point2 c1, double r1, Point2 c2, double r2) {
  // Canonical argument order keeps the result bit-symmetric.
  if (r2 > r1) std::swap(r1, r2);
  const double d = distance(c1, c2);
  if (r1 <= 0.0 || r2 <= 0.0 || d >= r1 + r2) return 0.0;
  if (d <= std::abs(r1 - r2)) {
    const double r = std::min(r1, r2);
    return kPi * r * r;
  }
  const double a1 = std::clamp((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1), -1.0, 1.0);
  const double a2 = std::clamp((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2), -1.0, 1.0);
  const double kite = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
  const double area = r1 * r1 * std::acos(a1) + r2 * r2 * std::acos(a2) - 0.5 * std::sqrt(std::max(0.0, kite));
  return std::clamp(area, 0.0, kPi * std::min(r1, r2) * std::min(r1, r2));
}

ImmersionResult compare_circles(const GyrationCircle& test, const GyrationCircle& reference) {
  ImmersionResult r;
  r.center_distance = distance(test.center, reference.center);
  if (test.radius <= 0.0 || reference.radius <= 0.0) {
    r.degenerate = true;
    const bool both_points = test.radius <= 0.0 && reference.radius <= 0.0;
    r.index_percent = (both_points && r.center_distance <= kCoincidentCenters) ? 100.0 : 0.0;
    r.union_area = kPi * (test.radius * test.radius + reference.radius * reference.radius);
    return r;
  }
  r.intersection_area = circle_intersection_area(test, reference);
  r.union_area = kPi * test.radius * test.radius + kPi * reference.radius * reference.radius - r.intersection_area;
  r.index_percent = std::clamp(100.0 * (r.intersection_area / r.union_area), 0.0, 100.0);
  return r;
}

}  // namespace immersia
