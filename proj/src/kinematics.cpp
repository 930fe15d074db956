#include "immersia/kinematics.hpp"

#include <cmath>

#include <Eigen/Geometry>
#include <Eigen/QR>

#include "immersia/error.hpp"

namespace immersia {

namespace {

constexpr double kCoincident = 1e-12;

std::vector<double> first_difference(std::span<const double> v, double dt) {
  const auto n = v.size();
  std::vector<double> d(n);
  const double h2 = 2.0 * dt;
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / h2;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / h2;
  d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / h2;
  return d;
}

std::vector<double> savitzky_golay(std::span<const double> x, int window, int polyorder) {
  const int m = window / 2;
  const auto n = static_cast<int>(x.size());
  Eigen::MatrixXd vander(window, polyorder + 1);
  for (int r = 0; r < window; ++r) {
    const double tau = static_cast<double>(r - m) / m;
    double p = 1.0;
    for (int c = 0; c <= polyorder; ++c, p *= tau) vander(r, c) = p;
  }
  const Eigen::MatrixXd pinv =
      vander.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(window, window));

  auto weights_at = [&](double tau) {
    Eigen::RowVectorXd basis(polyorder + 1);
    double p = 1.0;
    for (int c = 0; c <= polyorder; ++c, p *= tau) basis(c) = p;
    return Eigen::RowVectorXd(basis * pinv);
  };
  auto apply = [&](const Eigen::RowVectorXd& w, int start) {
    double acc = 0.0;
    for (int k = 0; k < window; ++k) acc += w(k) * x[static_cast<std::size_t>(start + k)];
    return acc;
  };

  std::vector<double> out(x.size());
  const Eigen::RowVectorXd center = weights_at(0.0);
  for (int i = m; i < n - m; ++i) out[static_cast<std::size_t>(i)] = apply(center, i - m);
  for (int i = 0; i < m; ++i) {
    out[static_cast<std::size_t>(i)] = apply(weights_at(static_cast<double>(i - m) / m), 0);
    const int j = n - m + i;
    out[static_cast<std::size_t>(j)] = apply(weights_at(static_cast<double>(i + 1) / m), n - window);
  }
  return out;
}

std::vector<double> moving_average(std::span<const double> x, int window) {
  const auto n = x.size();
  const auto m = static_cast<std::size_t>(window / 2);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t half = std::min({m, i, n - 1 - i});
    double acc = 0.0;
    for (std::size_t k = i - half; k <= i + half; ++k) acc += x[k];
    out[i] = acc / static_cast<double>(2 * half + 1);
  }
  return out;
}

double angle_between(const Vec3& u, const Vec3& v) {
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

}  // namespace

void SmoothingConfig::validate() const {
  if (method == SmoothingMethod::None) return;
  if (window < 3 || window % 2 == 0) throw ConfigError("smoothing window must be odd and >= 3");
  if (method == SmoothingMethod::SavitzkyGolay && (polyorder < 0 || polyorder >= window)) {
    throw ConfigError("Savitzky-Golay polyorder must be in [0, window)");
  }
}

std::string_view to_string(SmoothingMethod method) {
  switch (method) {
    case SmoothingMethod::None: return "none";
    case SmoothingMethod::MovingAverage: return "moving_average";
    case SmoothingMethod::SavitzkyGolay: return "savitzky_golay";
  }
  return "none";
}

SmoothingMethod smoothing_method_from_string(std::string_view name) {
  if (name == "none") return SmoothingMethod::None;
  if (name == "moving_average") return SmoothingMethod::MovingAverage;
  if (name == "savitzky_golay") return SmoothingMethod::SavitzkyGolay;
  throw ConfigError("unknown smoothing method '" + std::string(name) + "'");
}

std::vector<double> smooth(std::span<const double> values, const SmoothingConfig& cfg) {
  cfg.validate();
  if (cfg.method == SmoothingMethod::None) return {values.begin(), values.end()};
  if (values.size() < static_cast<std::size_t>(cfg.window)) {
    throw ArgumentError("channel shorter than the smoothing window");
  }
  if (cfg.method == SmoothingMethod::MovingAverage) return moving_average(values, cfg.window);
  return savitzky_golay(values, cfg.window, cfg.polyorder);
}

std::vector<double> differentiate(std::span<const double> values, double dt,
                                  const SmoothingConfig& smoothing, int order) {
  if (!(dt > 0.0)) throw ArgumentError("dt must be positive");
  if (order != 1 && order != 2) throw ArgumentError("derivative order must be 1 or 2");
  const std::size_t min_len =
      smoothing.method == SmoothingMethod::None ? 3 : static_cast<std::size_t>(std::max(3, smoothing.window));
  if (values.size() < min_len) throw ArgumentError("channel too short to differentiate");
  auto d = first_difference(smooth(values, smoothing), dt);
  if (order == 2) d = first_difference(d, dt);
  return d;
}

Channel differentiate(const Channel& channel, double dt, const SmoothingConfig& smoothing, int order,
                      std::string name) {
  ChannelKind kind = ChannelKind::Dimensionless;
  if (channel.kind == ChannelKind::Position && order == 2) kind = ChannelKind::Acceleration;
  return {std::move(name), kind, differentiate(channel.values, dt, smoothing, order)};
}

std::vector<double> joint_angle(std::span<const Vec3> proximal, std::span<const Vec3> joint,
                                std::span<const Vec3> distal) {
  if (proximal.size() != joint.size() || distal.size() != joint.size()) {
    throw ArgumentError("marker series lengths differ");
  }
  std::vector<double> out(joint.size());
  for (std::size_t i = 0; i < joint.size(); ++i) {
    const Vec3 a = proximal[i] - joint[i];
    const Vec3 b = distal[i] - joint[i];
    if (a.norm() <= kCoincident || b.norm() <= kCoincident || (proximal[i] - distal[i]).norm() <= kCoincident) {
      throw DegenerateGeometryError("coincident markers in joint angle", i);
    }
    out[i] = angle_between(a, b);
  }
  return out;
}

std::vector<double> vector_angle(std::span<const Vec3> u, std::span<const Vec3> v) {
  if (u.size() != v.size()) throw ArgumentError("vector series lengths differ");
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i].norm() <= kCoincident || v[i].norm() <= kCoincident) {
      throw DegenerateGeometryError("zero-length vector in vector angle", i);
    }
    out[i] = angle_between(u[i], v[i]);
  }
  return out;
}

void MarkerSet::add(std::string name, Vec3Series positions) {
  if (!markers_.empty() && positions.size() != length_) {
    throw ArgumentError("marker '" + name + "' length differs from the set");
  }
  length_ = positions.size();
  markers_[std::move(name)] = std::move(positions);
}

const Vec3Series& MarkerSet::at(const std::string& name) const {
  auto it = markers_.find(name);
  if (it == markers_.end()) throw ConfigError("missing marker '" + name + "'");
  return it->second;
}

Vec3Series marker_series(const MotionTrace& trace, const std::string& name) {
  const auto x = trace.values(name + "_x");
  const auto y = trace.values(name + "_y");
  const auto z = trace.values(name + "_z");
  Vec3Series out(trace.length());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = Vec3(x[i], y[i], z[i]);
  return out;
}

MarkerSet MarkerSet::from_trace(const MotionTrace& trace, std::span<const std::string> names) {
  MarkerSet set;
  for (const auto& n : names) set.add(n, marker_series(trace, n));
  return set;
}

Vec3Series cog_estimate(const MarkerSet& markers, const std::map<std::string, double>& weights) {
  if (weights.empty()) throw ConfigError("CoG weight table is empty");
  double sum = 0.0;
  for (const auto& [name, w] : weights) sum += w;
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("CoG weights must sum to 1");
  Vec3Series out(markers.length(), Vec3::Zero());
  for (const auto& [name, w] : weights) {
    const auto& series = markers.at(name);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * series[i];
  }
  return out;
}

}  // namespace immersia
