#pragma once

#include <string_view>

#include "immersia/geometry.hpp"

namespace immersia {

inline constexpr double kGravity = 9.81;

// Gravity-free acceleration of the avatar in its own frame.
struct AccelSample {
  double a_long = 0.0;  // forward positive
  double a_lat = 0.0;
  double a_vert = 0.0;
};

struct PoseReference {
  double roll = 0.0;   // rad
  double pitch = 0.0;  // rad
  double heave = 0.0;  // m

  friend bool operator==(const PoseReference&, const PoseReference&) = default;
};

// Platform pose envelope. The defaults are not taken from hardware data.
struct PoseLimits {
  double roll_max = deg_to_rad(15.0);
  double pitch_max = deg_to_rad(15.0);
  double heave_max = 0.05;

  void validate() const;
};

enum class CueingMode { SkiAccel, BoatPose };

std::string_view to_string(CueingMode mode);
CueingMode cueing_mode_from_string(std::string_view name);

// Roll/pitch that tilt the gravity vector so the platform-frame specific
// force reproduces the horizontal acceleration: g*sin(pitch) = a_long and
// -g*sin(roll) = a_lat, saturated at the limits. Heave is left at zero; the
// streaming AccelerationCueing adds the washed-out heave channel.
PoseReference tilt_coordination(const AccelSample& a, double g, const PoseLimits& limits);

PoseReference clamp_pose(const PoseReference& pose, const PoseLimits& limits);

// Boat mode: the boat's roll, pitch and heave drive the platform directly.
inline PoseReference boat_passthrough(double roll, double pitch, double heave, const PoseLimits& limits) {
  return clamp_pose({roll, pitch, heave}, limits);
}

// Second-order high-pass washout of doubly integrated vertical acceleration:
// heave'' + 2*zeta*w*heave' + w^2*heave = a_vert. Two state variables.
class HeaveWashout {
 public:
  explicit HeaveWashout(double cutoff_hz = 0.5, double damping = 0.7071067811865476);

  // Advances by dt and returns the unclamped heave displacement.
  double update(double a_vert, double dt);
  void reset() { position_ = velocity_ = 0.0; }
  void set_state(double position, double velocity) {
    position_ = position;
    velocity_ = velocity;
  }

  double position() const noexcept { return position_; }
  double velocity() const noexcept { return velocity_; }

 private:
  double omega_;
  double damping_;
  double position_ = 0.0;
  double velocity_ = 0.0;
};

// Streaming ski-mode cueing: tilt coordination plus the heave washout.
class AccelerationCueing {
 public:
  explicit AccelerationCueing(PoseLimits limits = {}, double g = kGravity, double washout_cutoff_hz = 0.5);

  PoseReference update(const AccelSample& a, double dt);
  void reset() { washout_.reset(); }

  const PoseLimits& limits() const noexcept { return limits_; }

 private:
  PoseLimits limits_;
  double g_;
  HeaveWashout washout_;
};

}  // namespace immersia
