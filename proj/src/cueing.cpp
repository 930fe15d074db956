#include "immersia/cueing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "immersia/error.hpp"

namespace immersia {

namespace {

double tilt_for(double ratio, double max_angle) {
  const double s = std::sin(max_angle);
  if (ratio >= s) return max_angle;
  if (ratio <= -s) return -max_angle;
  return std::asin(ratio);
}

}  // namespace

void PoseLimits::validate() const {
  if (!(roll_max > 0.0) || !(pitch_max > 0.0) || !(heave_max > 0.0)) {
    throw ConfigError("pose limits must be positive");
  }
  if (roll_max >= kPi / 2 || pitch_max >= kPi / 2) throw ConfigError("tilt limits must be below 90 degrees");
}

std::string_view to_string(CueingMode mode) {
  return mode == CueingMode::SkiAccel ? "ski_accel" : "boat_pose";
}

CueingMode cueing_mode_from_string(std::string_view name) {
  if (name == "ski_accel") return CueingMode::SkiAccel;
  if (name == "boat_pose") return CueingMode::BoatPose;
  throw ConfigError("unknown cueing mode '" + std::string(name) + "'");
}

PoseReference tilt_coordination(const AccelSample& a, double g, const PoseLimits& limits) {
  PoseReference p;
  p.pitch = tilt_for(a.a_long / g, limits.pitch_max);
  p.roll = tilt_for(-a.a_lat / g, limits.roll_max);
  return p;
}

PoseReference clamp_pose(const PoseReference& pose, const PoseLimits& limits) {
  return {std::clamp(pose.roll, -limits.roll_max, limits.roll_max),
          std::clamp(pose.pitch, -limits.pitch_max, limits.pitch_max),
          std::clamp(pose.heave, -limits.heave_max, limits.heave_max)};
}

HeaveWashout::HeaveWashout(double cutoff_hz, double damping)
    : omega_(2.0 * kPi * cutoff_hz), damping_(damping) {
  if (!(cutoff_hz > 0.0) || !(damping > 0.0)) throw ConfigError("washout cutoff and damping must be positive");
}

double HeaveWashout::update(double a_vert, double dt) {
  // Semi-implicit Euler; stable for dt * omega well below 1.
  const double accel = a_vert - 2.0 * damping_ * omega_ * velocity_ - omega_ * omega_ * position_;
  velocity_ += accel * dt;
  position_ += velocity_ * dt;
  return position_;
}

AccelerationCueing::AccelerationCueing(PoseLimits limits, double g, double washout_cutoff_hz)
    : limits_(limits), g_(g), washout_(washout_cutoff_hz) {
  limits_.validate();
}

PoseReference AccelerationCueing::update(const AccelSample& a, double dt) {
  auto pose = tilt_coordination(a, g_, limits_);
  pose.heave = std::clamp(washout_.update(a.a_vert, dt), -limits_.heave_max, limits_.heave_max);
  return pose;
}

}  // namespace immersia
