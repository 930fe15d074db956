#include "immersia/submetrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "immersia/error.hpp"

namespace immersia {

namespace {

double order_statistic(const std::vector<double>& sorted, double pos) {
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0 || lo + 1 >= sorted.size()) return sorted[lo];
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

Circle diameter_circle(Point2 a, Point2 b) {
  const Point2 c{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
  return {c, std::max(distance(c, a), distance(c, b))};
}

Circle circumcircle(Point2 a, Point2 b, Point2 c) {
  const Point2 ab = b - a;
  const Point2 ac = c - a;
  const double ab2 = ab.x * ab.x + ab.y * ab.y;
  const double ac2 = ac.x * ac.x + ac.y * ac.y;
  const double det = 2.0 * (ab.x * ac.y - ab.y * ac.x);
  if (std::abs(det) <= 1e-14 * (ab2 + ac2)) {
    // Collinear: the farthest pair spans the circle.
    Circle best = diameter_circle(a, b);
    for (const auto& cand : {diameter_circle(a, c), diameter_circle(b, c)}) {
      if (cand.radius > best.radius) best = cand;
    }
    return best;
  }
  const Point2 center{a.x + (ac.y * ab2 - ab.y * ac2) / det, a.y + (ab.x * ac2 - ac.x * ab2) / det};
  return {center, std::max({distance(center, a), distance(center, b), distance(center, c)})};
}

}  // namespace

Quartiles quartiles(std::span<const double> values) {
  if (values.size() < 4) throw InsufficientDataError("quartiles need at least 4 values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double last = static_cast<double>(sorted.size() - 1);
  return {order_statistic(sorted, last * 0.25), order_statistic(sorted, last * 0.75)};
}

Circle min_enclosing_circle(std::span<const Point2> points, std::uint64_t seed) {
  if (points.empty()) throw ArgumentError("minimum enclosing circle of an empty point set");
  double scale = 1.0;
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ArgumentError("non-finite point");
    scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  }
  const double eps = 1e-12 * scale;
  auto inside = [eps](const Circle& c, Point2 p) { return distance(c.center, p) <= c.radius + eps; };

  std::vector<Point2> pts(points.begin(), points.end());
  std::mt19937_64 rng(seed);
  std::shuffle(pts.begin(), pts.end(), rng);

  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (inside(c, pts[i])) continue;
    c = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (inside(c, pts[j])) continue;
      c = diameter_circle(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (!inside(c, pts[k])) c = circumcircle(pts[i], pts[j], pts[k]);
      }
    }
  }
  return c;
}

void validate_spec_set(std::span<const SubmetricSpec> specs) {
  std::set<std::string> names;
  std::vector<int> axes;
  for (const auto& s : specs) {
    if (s.dimensionality != 1 && s.dimensionality != 2) {
      throw ConfigError("submetric '" + s.name + "': dimensionality must be 1 or 2");
    }
    if (s.sources.size() != static_cast<std::size_t>(s.dimensionality)) {
      throw ConfigError("submetric '" + s.name + "': dimensionality does not match the number of sources");
    }
    if (!names.insert(s.name).second) throw ConfigError("duplicate submetric '" + s.name + "'");
    axes.push_back(s.axis_index);
  }
  std::sort(axes.begin(), axes.end());
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (axes[i] != static_cast<int>(i)) {
      throw ConfigError("submetric axis indices must be exactly 0..n-1 without gaps");
    }
  }
}

SubmetricValue evaluate_submetric(const MotionTrace& trace, const SubmetricSpec& spec) {
  if (spec.sources.size() != static_cast<std::size_t>(spec.dimensionality)) {
    throw ConfigError("submetric '" + spec.name + "': dimensionality does not match the number of sources");
  }
  SubmetricValue out;
  out.name = spec.name;
  out.dimensionality = spec.dimensionality;
  out.axis_index = spec.axis_index;
  const auto& first = trace.channel(spec.sources[0]);
  out.unit = std::string(unit_of(first.kind));
  if (spec.dimensionality == 1) {
    const auto q = quartiles(first.values);
    out.quartiles = q;
    out.value = q.iqr();
  } else {
    const auto& second = trace.channel(spec.sources[1]);
    std::vector<Point2> pts(trace.length());
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {first.values[i], second.values[i]};
    const auto c = min_enclosing_circle(pts);
    out.mec_center = c.center;
    out.value = c.radius;
  }
  return out;
}

std::vector<SubmetricValue> evaluate_submetrics(const MotionTrace& trace, std::span<const SubmetricSpec> specs) {
  validate_spec_set(specs);
  std::vector<SubmetricValue> out;
  out.reserve(specs.size());
  for (const auto& s : specs) out.push_back(evaluate_submetric(trace, s));
  std::sort(out.begin(), out.end(),
            [](const SubmetricValue& a, const SubmetricValue& b) { return a.axis_index < b.axis_index; });
  return out;
}

std::vector<SubmetricSpec> submetric_preset(std::string_view name) {
  if (name == "ski") {
    return {
        {"cog_rom", 1, {"cog_z"}, 0},
        {"knee_right_rom", 1, {"knee_right"}, 1},
        {"knee_left_rom", 1, {"knee_left"}, 2},
    };
  }
  if (name == "boat") {
    return {
        {"cog_sway", 2, {"cog_x", "cog_y"}, 0},
        {"cop_variation", 2, {"cop_x", "cop_y"}, 1},
        {"cog_chest_feet_angle", 1, {"cog_chest_feet_angle"}, 2},
        {"seated_cog_chest_angle", 1, {"cog_chest_angle"}, 3},
    };
  }
  throw ConfigError("unknown submetric preset '" + std::string(name) + "'");
}

}  // namespace immersia
