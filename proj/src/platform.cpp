#include "immersia/platform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "immersia/error.hpp"

namespace immersia {

namespace {

// The inner loop may ask for more than the leg can deliver; the velocity
// clamp downstream is what enforces the hardware limit.
constexpr double kInnerCommandHeadroom = 10.0;

bool finite(const PlatformState& s) {
  auto ok = [](double v) { return std::isfinite(v); };
  bool good = ok(s.pose.roll) && ok(s.pose.pitch) && ok(s.pose.heave) && ok(s.heave_acceleration) &&
              s.imu.specific_force.allFinite();
  for (int i = 0; i < 3; ++i) good = good && ok(s.legs[i]) && ok(s.leg_velocities[i]) && ok(s.leg_commands[i]);
  return good;
}

double sample_at(std::span<const double> v, double u) {
  const double nearest = std::round(u);
  if (std::abs(u - nearest) <= 1e-9 && nearest < static_cast<double>(v.size())) {
    return v[static_cast<std::size_t>(nearest)];
  }
  if (u >= static_cast<double>(v.size() - 1)) return v.back();
  const auto i = static_cast<std::size_t>(std::floor(u));
  const double frac = u - static_cast<double>(i);
  return v[i] + frac * (v[i + 1] - v[i]);
}

}  // namespace

double pid_update(const PidGains& gains, PidState& state, double error, double dt, double limit) {
  const double derivative = state.primed ? (error - state.prev_error) / dt : 0.0;
  const double integral = state.integral + error * dt;
  const double raw = gains.kp * error + gains.ki * integral + gains.kd * derivative;
  state.prev_error = error;
  state.primed = true;
  if (raw > limit) return limit;
  if (raw < -limit) return -limit;
  state.integral = integral;
  return raw;
}

double PlatformConfig::actuator_time_constant() const { return 1.0 / (2.0 * kPi * actuator_bandwidth); }

void PlatformConfig::validate() const {
  if (!(attachment_radius > 0.0)) throw ConfigError("attachment_radius must be positive");
  if (!(actuator_bandwidth > 0.0)) throw ConfigError("actuator_bandwidth must be positive");
  if (!(max_leg_velocity > 0.0)) throw ConfigError("max_leg_velocity must be positive");
  if (!(sim_rate >= 10.0 * actuator_bandwidth)) {
    throw ConfigError("sim_rate must be at least 10x the actuator bandwidth");
  }
  if (!(gravity > 0.0)) throw ConfigError("gravity must be positive");
  if (!(imu_noise_sigma >= 0.0)) throw ConfigError("imu_noise_sigma must be nonnegative");
  limits.validate();
  // The three attachment points must span a plane.
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i) m.row(i) << 1.0, std::cos(leg_angles[i]), std::sin(leg_angles[i]);
  if (std::abs(m.determinant()) < 1e-9) throw ConfigError("leg attachment azimuths are degenerate");
}

LegVector inverse_kinematics(const PoseReference& pose, const PlatformConfig& config) {
  const double sr = std::sin(pose.roll);
  const double sp = std::sin(pose.pitch);
  LegVector legs{};
  for (int i = 0; i < 3; ++i) {
    const double g = config.leg_angles[i];
    legs[i] = pose.heave + config.attachment_radius * (sr * std::sin(g) - sp * std::cos(g));
  }
  return legs;
}

PoseReference forward_kinematics(const LegVector& legs, const PlatformConfig& config) {
  Eigen::Matrix3d a;
  Eigen::Vector3d b;
  for (int i = 0; i < 3; ++i) {
    const double g = config.leg_angles[i];
    a.row(i) << 1.0, config.attachment_radius * std::cos(g), config.attachment_radius * std::sin(g);
    b(i) = legs[i];
  }
  const Eigen::Vector3d plane = a.colPivHouseholderQr().solve(b);
  return {std::asin(std::clamp(plane(2), -1.0, 1.0)), std::asin(std::clamp(-plane(1), -1.0, 1.0)), plane(0)};
}

ImuSample imu_measure(const PoseReference& pose, const Eigen::Vector3d& world_accel, double g,
                      double noise_sigma, std::mt19937_64* rng) {
  const double cr = std::cos(pose.roll), sr = std::sin(pose.roll);
  const double cp = std::cos(pose.pitch), sp = std::sin(pose.pitch);
  Eigen::Matrix3d rx, ry;
  rx << 1, 0, 0, 0, cr, -sr, 0, sr, cr;
  ry << cp, 0, sp, 0, 1, 0, -sp, 0, cp;
  const Eigen::Matrix3d rot = ry * rx;
  ImuSample s;
  s.specific_force = rot.transpose() * (world_accel - Eigen::Vector3d(0.0, 0.0, g));
  if (noise_sigma > 0.0 && rng != nullptr) {
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (int i = 0; i < 3; ++i) s.specific_force(i) += noise(*rng);
  }
  return s;
}

PlatformState PlatformState::at_rest(double g) {
  PlatformState s;
  s.imu.specific_force = Eigen::Vector3d(0.0, 0.0, -g);
  return s;
}

Platform::Platform(PlatformConfig config) : config_(std::move(config)) { config_.validate(); }

PlatformState Platform::step(const PlatformState& state, const PlatformReference& reference, double dt,
                             std::mt19937_64* noise_rng) const {
  if (std::abs(dt - this->dt()) > 1e-12) throw ArgumentError("step dt must equal 1/sim_rate");
  const auto& cfg = config_;
  PlatformState next = state;
  next.step_index = state.step_index + 1;
  next.time = static_cast<double>(next.step_index) * dt;

  PoseReference command;
  if (const auto* pose = std::get_if<PoseReference>(&reference)) {
    command = clamp_pose(*pose, cfg.limits);
  } else {
    const auto& accel = std::get<AccelSample>(reference);
    const Eigen::Vector3d& measured = state.imu.specific_force;
    const double corr_long = pid_update(cfg.pid_outer, next.outer[0], accel.a_long - measured.x(), dt,
                                        cfg.gravity * std::sin(cfg.limits.pitch_max));
    const double corr_lat = pid_update(cfg.pid_outer, next.outer[1], accel.a_lat - measured.y(), dt,
                                       cfg.gravity * std::sin(cfg.limits.roll_max));
    command = tilt_coordination({accel.a_long + corr_long, accel.a_lat + corr_lat, accel.a_vert}, cfg.gravity,
                                cfg.limits);
    HeaveWashout washout(cfg.washout_cutoff);
    washout.set_state(state.washout_position, state.washout_velocity);
    const double heave = washout.update(accel.a_vert, dt);
    next.washout_position = washout.position();
    next.washout_velocity = washout.velocity();
    command.heave = std::clamp(heave, -cfg.limits.heave_max, cfg.limits.heave_max);
  }
  next.command = command;
  next.leg_commands = inverse_kinematics(command, cfg);

  const double alpha = 1.0 - std::exp(-dt / cfg.actuator_time_constant());
  const double vmax = cfg.max_leg_velocity;
  double heave_velocity = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double v_cmd = pid_update(cfg.pid_inner, next.inner[i], next.leg_commands[i] - state.legs[i], dt,
                                    kInnerCommandHeadroom * vmax);
    double v = state.leg_velocities[i] + alpha * (v_cmd - state.leg_velocities[i]);
    v = std::clamp(v, -vmax, vmax);
    next.leg_velocities[i] = v;
    next.legs[i] = state.legs[i] + v * dt;
    heave_velocity += v / 3.0;
  }
  next.pose = forward_kinematics(next.legs, cfg);
  next.heave_velocity = heave_velocity;
  next.heave_acceleration = (heave_velocity - state.heave_velocity) / dt;
  next.imu = imu_measure(next.pose, Eigen::Vector3d(0.0, 0.0, next.heave_acceleration), cfg.gravity,
                         cfg.imu_noise_sigma, noise_rng);

  if (!finite(next)) throw SimulationFault("non-finite platform state", next.step_index);
  for (double v : next.leg_velocities) {
    if (std::abs(v) > vmax) throw SimulationFault("leg velocity limit violated", next.step_index);
  }
  return next;
}

std::array<const char*, 3> reference_channels(CueingMode mode) {
  if (mode == CueingMode::SkiAccel) return {"a_long", "a_lat", "a_vert"};
  return {"roll", "pitch", "heave"};
}

SimulationResult simulate(const MotionTrace& reference, const PlatformConfig& config, CueingMode mode) {
  const Platform platform(config);
  const auto names = reference_channels(mode);
  std::array<std::span<const double>, 3> ref;
  for (int i = 0; i < 3; ++i) ref[i] = reference.values(names[i]);

  const double dt = platform.dt();
  const auto count = static_cast<std::size_t>(std::floor(reference.duration() * config.sim_rate + 1e-9)) + 1;
  const double ratio = reference.sample_rate() / config.sim_rate;

  const std::array<const char*, 18> out_names = {
      "roll",    "pitch",   "heave",   "cmd_roll",  "cmd_pitch", "cmd_heave",
      "leg_1",   "leg_2",   "leg_3",   "leg_vel_1", "leg_vel_2", "leg_vel_3",
      "imu_fx",  "imu_fy",  "imu_fz",  "leg_cmd_1", "leg_cmd_2", "leg_cmd_3"};
  const std::array<ChannelKind, 18> out_kinds = {
      ChannelKind::Angle,        ChannelKind::Angle,        ChannelKind::Position, ChannelKind::Angle,
      ChannelKind::Angle,        ChannelKind::Position,     ChannelKind::Position, ChannelKind::Position,
      ChannelKind::Position,     ChannelKind::Dimensionless, ChannelKind::Dimensionless,
      ChannelKind::Dimensionless, ChannelKind::Acceleration, ChannelKind::Acceleration,
      ChannelKind::Acceleration, ChannelKind::Position,     ChannelKind::Position, ChannelKind::Position};
  std::array<std::vector<double>, 18> rec;
  for (auto& r : rec) r.reserve(count);

  SimulationResult result{reference, reference};
  auto record = [&](const PlatformState& s) {
    const std::array<double, 18> row = {
        s.pose.roll, s.pose.pitch, s.pose.heave, s.command.roll, s.command.pitch, s.command.heave,
        s.legs[0], s.legs[1], s.legs[2], s.leg_velocities[0], s.leg_velocities[1], s.leg_velocities[2],
        s.imu.specific_force.x(), s.imu.specific_force.y(), s.imu.specific_force.z(),
        s.leg_commands[0], s.leg_commands[1], s.leg_commands[2]};
    for (std::size_t c = 0; c < row.size(); ++c) rec[c].push_back(row[c]);
    for (double v : s.leg_velocities) result.max_leg_speed = std::max(result.max_leg_speed, std::abs(v));
  };

  std::mt19937_64 rng(config.seed);
  std::mt19937_64* noise = config.imu_noise_sigma > 0.0 ? &rng : nullptr;
  PlatformState state = PlatformState::at_rest(config.gravity);
  record(state);
  for (std::size_t k = 1; k < count; ++k) {
    const double u = static_cast<double>(k) * ratio;
    const double r0 = sample_at(ref[0], u), r1 = sample_at(ref[1], u), r2 = sample_at(ref[2], u);
    PlatformReference target;
    if (mode == CueingMode::SkiAccel) {
      target = AccelSample{r0, r1, r2};
    } else {
      target = PoseReference{r0, r1, r2};
    }
    state = platform.step(state, target, dt, noise);
    record(state);
  }
  result.steps = count - 1;

  std::vector<Channel> channels;
  for (std::size_t c = 0; c < out_names.size(); ++c) {
    channels.push_back({out_names[c], out_kinds[c], std::move(rec[c])});
  }
  result.full_rate = MotionTrace(config.sim_rate, std::move(channels), reference.start_time());
  result.trace = resample(result.full_rate, reference.sample_rate());
  return result;
}

}  // namespace immersia
