#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <variant>

#include <Eigen/Core>

#include "immersia/cueing.hpp"
#include "immersia/trace.hpp"

namespace immersia {

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
};

struct PidState {
  double integral = 0.0;
  double prev_error = 0.0;
  bool primed = false;
};

// One PID update with output saturation at +/-limit. The integrator only
// accumulates while the output is unsaturated.
double pid_update(const PidGains& gains, PidState& state, double error, double dt, double limit);

using LegVector = std::array<double, 3>;

// 3-DoF (roll, pitch, heave) platform with three prismatic legs on a circle.
struct PlatformConfig {
  double attachment_radius = 0.15;
  std::array<double, 3> leg_angles = {deg_to_rad(90.0), deg_to_rad(210.0), deg_to_rad(330.0)};
  double actuator_bandwidth = 20.0;  // Hz
  double max_leg_velocity = 0.120;   // m/s
  // Outer loop: acceleration error (m/s^2) -> acceleration command correction.
  PidGains pid_outer{0.2, 4.0, 0.0};
  // Inner loop: leg displacement error (m) -> leg velocity command (m/s).
  PidGains pid_inner{60.0, 0.0, 0.0};
  double sim_rate = 1000.0;  // Hz
  PoseLimits limits;
  double gravity = kGravity;
  double washout_cutoff = 0.5;  // Hz
  double imu_noise_sigma = 0.0;
  std::uint64_t seed = 0;
  double torque_capacity = 892.0;  // N*m, metadata only

  double actuator_time_constant() const;
  // Throws ConfigError; also enforces sim_rate >= 10x actuator bandwidth.
  void validate() const;
};

// leg_i = heave + R*(sin(roll)*sin(gamma_i) - sin(pitch)*cos(gamma_i)).
LegVector inverse_kinematics(const PoseReference& pose, const PlatformConfig& config);

// Least-squares plane z = h + a*x + b*y through the leg tips
// (R cos gamma_i, R sin gamma_i, leg_i); pitch = asin(-a), roll = asin(b).
PoseReference forward_kinematics(const LegVector& legs, const PlatformConfig& config);

struct ImuSample {
  Eigen::Vector3d specific_force = Eigen::Vector3d::Zero();
};

// Specific force R^T (a_world - g z) with R = Ry(pitch) Rx(roll); optional
// Gaussian noise is added last.
ImuSample imu_measure(const PoseReference& pose, const Eigen::Vector3d& world_accel, double g,
                      double noise_sigma = 0.0, std::mt19937_64* rng = nullptr);

struct PlatformState {
  PoseReference pose;
  PoseReference command;
  LegVector legs{};
  LegVector leg_commands{};
  LegVector leg_velocities{};
  std::array<PidState, 3> inner{};
  std::array<PidState, 2> outer{};  // longitudinal, lateral
  double washout_position = 0.0;
  double washout_velocity = 0.0;
  double heave_velocity = 0.0;
  double heave_acceleration = 0.0;
  ImuSample imu;
  double time = 0.0;
  std::size_t step_index = 0;

  static PlatformState at_rest(double g = kGravity);
};

using PlatformReference = std::variant<PoseReference, AccelSample>;

class Platform {
 public:
  explicit Platform(PlatformConfig config);

  const PlatformConfig& config() const noexcept { return config_; }
  double dt() const noexcept { return 1.0 / config_.sim_rate; }

  // Advances one fixed step. Pose references are clamped to the limits and
  // fed to the inner loop; acceleration references pass through the outer
  // loop and tilt coordination first. Throws SimulationFault on non-finite
  // state and ArgumentError when dt is not 1/sim_rate.
  PlatformState step(const PlatformState& state, const PlatformReference& reference, double dt,
                     std::mt19937_64* noise_rng = nullptr) const;

 private:
  PlatformConfig config_;
};

struct SimulationResult {
  MotionTrace trace;       // at the reference rate
  MotionTrace full_rate;   // at sim_rate
  double max_leg_speed = 0.0;
  std::size_t steps = 0;
};

// Channels required by each mode: ski -> a_long, a_lat, a_vert;
// boat -> roll, pitch, heave.
std::array<const char*, 3> reference_channels(CueingMode mode);

SimulationResult simulate(const MotionTrace& reference, const PlatformConfig& config, CueingMode mode);

}  // namespace immersia
