#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "immersia/geometry.hpp"
#include "immersia/trace.hpp"

namespace immersia {

struct Quartiles {
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr() const noexcept { return q3 - q1; }
};

// Name of the quartile estimator, echoed into reports.
inline constexpr const char* kQuartileRule =
    "linear interpolation between order statistics at (n-1)p (type 7)";

// Q1/Q3 by linear interpolation between order statistics at positions
// (n-1)*0.25 and (n-1)*0.75 of the sorted data. Needs at least 4 values.
Quartiles quartiles(std::span<const double> values);

inline constexpr std::uint64_t kMecSeed = 0x5eedc1c1e5ULL;

// Smallest circle containing every point (randomized incremental algorithm,
// shuffled with a fixed seed so results are reproducible).
Circle min_enclosing_circle(std::span<const Point2> points, std::uint64_t seed = kMecSeed);

// A radar-chart axis: 1D submetrics take the IQR of one channel, 2D submetrics
// take the minimum-enclosing-circle radius of a planar (x, y) channel pair.
struct SubmetricSpec {
  std::string name;
  int dimensionality = 1;
  std::vector<std::string> sources;
  int axis_index = 0;
};

struct SubmetricValue {
  std::string name;
  int dimensionality = 1;
  int axis_index = 0;
  double value = 0.0;
  std::string unit;
  std::optional<Quartiles> quartiles;  // 1D only
  std::optional<Point2> mec_center;    // 2D only
};

// Throws ConfigError on a dimensionality/source mismatch, duplicate names or
// axis indices that are not exactly {0..n-1}.
void validate_spec_set(std::span<const SubmetricSpec> specs);

SubmetricValue evaluate_submetric(const MotionTrace& trace, const SubmetricSpec& spec);

// Evaluates every submetric definition and returns the values ordered by axis index.
std::vector<SubmetricValue> evaluate_submetrics(const MotionTrace& trace, std::span<const SubmetricSpec> specs);

// Built-in submetric sets: "ski" and "boat".
std::vector<SubmetricSpec> submetric_preset(std::string_view name);

}  // namespace immersia
