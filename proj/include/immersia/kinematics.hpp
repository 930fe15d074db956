#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "immersia/trace.hpp"

namespace immersia {

using Vec3 = Eigen::Vector3d;
using Vec3Series = std::vector<Vec3>;

enum class SmoothingMethod { None, MovingAverage, SavitzkyGolay };

struct SmoothingConfig {
  SmoothingMethod method = SmoothingMethod::SavitzkyGolay;
  int window = 11;
  int polyorder = 3;

  static SmoothingConfig none() { return {SmoothingMethod::None, 3, 0}; }
  // Throws ConfigError unless the window is odd and >= 3 and polyorder < window.
  void validate() const;
};

std::string_view to_string(SmoothingMethod method);
SmoothingMethod smoothing_method_from_string(std::string_view name);

// Applies the configured smoother. Savitzky-Golay edges are evaluated from the
// polynomial fitted to the first/last full window; the moving average shrinks
// symmetrically near the ends.
std::vector<double> smooth(std::span<const double> values, const SmoothingConfig& cfg);

// Central differences on the smoothed signal, second-order one-sided at the
// ends; order 2 is the first difference applied twice. Output length equals
// input length.
std::vector<double> differentiate(std::span<const double> values, double dt,
                                  const SmoothingConfig& smoothing, int order);

Channel differentiate(const Channel& channel, double dt, const SmoothingConfig& smoothing, int order,
                      std::string name);

// Interior angle at `joint` between (proximal - joint) and (distal - joint).
std::vector<double> joint_angle(std::span<const Vec3> proximal, std::span<const Vec3> joint,
                                std::span<const Vec3> distal);

std::vector<double> vector_angle(std::span<const Vec3> u, std::span<const Vec3> v);

// Named 3D landmark trajectories sharing one sample count.
class MarkerSet {
 public:
  MarkerSet() = default;
  void add(std::string name, Vec3Series positions);

  bool contains(const std::string& name) const { return markers_.count(name) != 0; }
  const Vec3Series& at(const std::string& name) const;
  std::size_t length() const noexcept { return length_; }
  const std::map<std::string, Vec3Series>& markers() const noexcept { return markers_; }

  // Reads markers stored as `<name>_x`, `<name>_y`, `<name>_z` channels.
  static MarkerSet from_trace(const MotionTrace& trace, std::span<const std::string> names);

 private:
  std::map<std::string, Vec3Series> markers_;
  std::size_t length_ = 0;
};

Vec3Series marker_series(const MotionTrace& trace, const std::string& name);

// Weighted mean of marker positions. Weights must sum to 1 within 1e-9.
Vec3Series cog_estimate(const MarkerSet& markers, const std::map<std::string, double>& weights);

}  // namespace immersia
