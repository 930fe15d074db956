#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "immersia/error.hpp"
#include "immersia/platform.hpp"
#include "immersia/validation.hpp"
#include "oracles.hpp"

using namespace immersia;

namespace {

MotionTrace pose_trace(double rate, double seconds, auto roll, auto pitch, auto heave) {
  const auto n = static_cast<std::size_t>(seconds * rate) + 1;
  std::vector<double> r(n), p(n), h(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    r[i] = roll(t);
    p[i] = pitch(t);
    h[i] = heave(t);
  }
  return MotionTrace(rate, {{"roll", ChannelKind::Angle, r}, {"pitch", ChannelKind::Angle, p},
                            {"heave", ChannelKind::Position, h}});
}

double zero(double) { return 0.0; }

// Time after which |y - target| stays within 2 % of |target|.
double settling_time(const MotionTrace& t, const std::string& ch, double target) {
  const auto y = t.values(ch);
  double settle = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (std::abs(y[i] - target) > 0.02 * std::abs(target)) settle = t.time_at(i + 1);
  }
  return settle;
}

}  // namespace

TEST_CASE("inverse kinematics examples") {
  const PlatformConfig c;
  const auto level = inverse_kinematics({0, 0, 0.02}, c);
  for (double l : level) CHECK(l == doctest::Approx(0.02));
  const double th = deg_to_rad(5.0);
  const auto pitched = inverse_kinematics({0, th, 0}, c);
  CHECK(std::abs(pitched[0]) < 1e-15);
  CHECK(pitched[1] == doctest::Approx(c.attachment_radius * std::sin(th) * std::sqrt(3.0) / 2));
  CHECK(pitched[2] == doctest::Approx(-c.attachment_radius * std::sin(th) * std::sqrt(3.0) / 2));
  const auto rolled = inverse_kinematics({th, 0, 0}, c);
  CHECK(rolled[0] == doctest::Approx(c.attachment_radius * std::sin(th)));
  CHECK(rolled[1] == doctest::Approx(-0.5 * c.attachment_radius * std::sin(th)));
}

TEST_CASE("leg tips lie on the commanded plane and FK inverts IK") {
  const PlatformConfig c;
  oracle::Rng rng(61);
  for (int i = 0; i < 2000; ++i) {
    const PoseReference p{rng.uniform(-0.26, 0.26), rng.uniform(-0.26, 0.26), rng.uniform(-0.05, 0.05)};
    const auto legs = inverse_kinematics(p, c);
    for (std::size_t k = 0; k < 3; ++k) {
      const double x = c.attachment_radius * std::cos(c.leg_angles[k]);
      const double y = c.attachment_radius * std::sin(c.leg_angles[k]);
      CHECK(std::abs(legs[k] - (p.heave - std::sin(p.pitch) * x + std::sin(p.roll) * y)) < 1e-12);
    }
    const auto back = forward_kinematics(legs, c);
    CHECK(std::abs(back.roll - p.roll) < 1e-12);
    CHECK(std::abs(back.pitch - p.pitch) < 1e-12);
    CHECK(std::abs(back.heave - p.heave) < 1e-12);
  }
}

TEST_CASE("IMU specific force") {
  const auto rest = imu_measure({}, Eigen::Vector3d::Zero(), kGravity);
  CHECK(rest.specific_force.isApprox(Eigen::Vector3d(0, 0, -kGravity)));
  const double th = deg_to_rad(10.0);
  const auto pitched = imu_measure({0, th, 0}, Eigen::Vector3d::Zero(), kGravity);
  CHECK(pitched.specific_force.x() == doctest::Approx(kGravity * std::sin(th)));
  CHECK(std::abs(pitched.specific_force.y()) < 1e-12);
  const auto rolled = imu_measure({th, 0, 0}, Eigen::Vector3d::Zero(), kGravity);
  CHECK(rolled.specific_force.y() == doctest::Approx(-kGravity * std::sin(th)));
  const auto heaving = imu_measure({}, Eigen::Vector3d(0, 0, 2.0), kGravity);
  CHECK(heaving.specific_force.z() == doctest::Approx(2.0 - kGravity));
  const double norm = imu_measure({0.1, -0.2, 0}, Eigen::Vector3d::Zero(), kGravity).specific_force.norm();
  CHECK(norm == doctest::Approx(kGravity));
}

TEST_CASE("PID update") {
  PidState s;
  CHECK(pid_update({2.0, 0.0, 0.0}, s, 0.5, 0.01, 10.0) == 1.0);
  PidState i;
  pid_update({0.0, 1.0, 0.0}, i, 1.0, 0.1, 10.0);
  CHECK(i.integral == doctest::Approx(0.1));
  PidState w;
  for (int k = 0; k < 100; ++k) CHECK(pid_update({1.0, 10.0, 0.0}, w, 5.0, 0.1, 2.0) == 2.0);
  CHECK(w.integral < 1.0);  // no windup while saturated
}

TEST_CASE("config validation") {
  PlatformConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.actuator_time_constant() == doctest::Approx(1.0 / (2 * std::numbers::pi * 20.0)));
  c.sim_rate = 100.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = PlatformConfig{};
  c.max_leg_velocity = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = PlatformConfig{};
  c.leg_angles = {0.0, 0.0, 1.0};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("platform at rest stays at rest") {
  const Platform platform{PlatformConfig{}};
  auto s = PlatformState::at_rest();
  for (int i = 0; i < 2000; ++i) s = platform.step(s, PoseReference{}, platform.dt());
  for (double l : s.legs) CHECK(l == 0.0);
  CHECK(s.pose == PoseReference{});
  CHECK(s.imu.specific_force == Eigen::Vector3d(0, 0, -kGravity));
  auto a = PlatformState::at_rest();
  for (int i = 0; i < 2000; ++i) a = platform.step(a, AccelSample{}, platform.dt());
  CHECK(a.pose == PoseReference{});
  CHECK_THROWS_AS(platform.step(s, PoseReference{}, 0.002), ArgumentError);
}

TEST_CASE("non-finite state raises a simulation fault with the step index") {
  const Platform platform{PlatformConfig{}};
  auto s = PlatformState::at_rest();
  s.legs[1] = NAN;
  try {
    platform.step(s, PoseReference{}, platform.dt());
    FAIL("expected SimulationFault");
  } catch (const SimulationFault& e) {
    CHECK(e.step_index() == s.step_index + 1);
  }
}

TEST_CASE("step responses settle within half a second") {
  const PlatformConfig c;
  for (int axis = 0; axis < 3; ++axis) {
    const double target = axis == 2 ? 0.02 : deg_to_rad(5.0);
    auto step = [&](int which) { return [=](double) { return which == axis ? target : 0.0; }; };
    const auto ref = pose_trace(100.0, 2.0, step(0), step(1), step(2));
    const auto r = simulate(ref, c, CueingMode::BoatPose);
    const char* ch = axis == 0 ? "roll" : axis == 1 ? "pitch" : "heave";
    CHECK(settling_time(r.full_rate, ch, target) <= 0.5);
    CHECK(r.max_leg_speed <= c.max_leg_velocity);
  }
}

TEST_CASE("0.2 Hz roll is tracked with unit gain") {
  const PlatformConfig c;
  const double amp = deg_to_rad(5.0), w = 2 * std::numbers::pi * 0.2;
  const auto ref = pose_trace(100.0, 20.0, [&](double t) { return amp * std::sin(w * t); }, zero, zero);
  const auto r = simulate(ref, c, CueingMode::BoatPose);
  // Least-squares sine fit over the last 15 s.
  const auto roll = r.trace.values("roll");
  double ss = 0, sc = 0, cc = 0, ys = 0, yc = 0;
  for (std::size_t i = 500; i < roll.size(); ++i) {
    const double t = r.trace.time_at(i), s = std::sin(w * t), co = std::cos(w * t);
    ss += s * s;
    sc += s * co;
    cc += co * co;
    ys += roll[i] * s;
    yc += roll[i] * co;
  }
  const double det = ss * cc - sc * sc;
  const double a = (ys * cc - yc * sc) / det, b = (yc * ss - ys * sc) / det;
  CHECK(std::hypot(a, b) / amp >= 0.95);
  const std::vector<ChannelPair> pairs{{"roll", "roll"}};
  const auto rep = compare_traces(ref, r.trace, pairs, 20);
  REQUIRE(rep.pairs[0].rho.has_value());
  CHECK(*rep.pairs[0].rho >= 0.99);
}

TEST_CASE("fast ramps pin the legs at the velocity limit") {
  const PlatformConfig c;
  const auto ref = pose_trace(100.0, 2.0, [](double t) { return t < 0.2 ? 0.0 : deg_to_rad(14.0); }, zero, zero);
  const auto r = simulate(ref, c, CueingMode::BoatPose);
  CHECK(r.max_leg_speed == c.max_leg_velocity);
  for (int k = 1; k <= 3; ++k) {
    for (double v : r.full_rate.values("leg_vel_" + std::to_string(k))) CHECK(std::abs(v) <= c.max_leg_velocity);
  }
}

TEST_CASE("simulation is deterministic, including IMU noise") {
  PlatformConfig c;
  c.imu_noise_sigma = 0.05;
  c.seed = 7;
  const auto ref = pose_trace(100.0, 3.0, [](double t) { return 0.05 * std::sin(t); }, zero, zero);
  const auto a = simulate(ref, c, CueingMode::BoatPose);
  const auto b = simulate(ref, c, CueingMode::BoatPose);
  REQUIRE(a.trace.channels().size() == b.trace.channels().size());
  for (std::size_t k = 0; k < a.trace.channels().size(); ++k) {
    CHECK(a.trace.channels()[k].values == b.trace.channels()[k].values);
  }
}

TEST_CASE("ski mode reproduces longitudinal acceleration at the IMU") {
  const double rate = 100.0;
  std::vector<double> along(1001), zeros(1001, 0.0);
  for (std::size_t i = 0; i < along.size(); ++i) along[i] = 1.5 * std::sin(2 * std::numbers::pi * 0.3 * i / rate);
  const MotionTrace ref(rate, {{"a_long", ChannelKind::Acceleration, along},
                               {"a_lat", ChannelKind::Acceleration, zeros},
                               {"a_vert", ChannelKind::Acceleration, zeros}});
  const auto r = simulate(ref, PlatformConfig{}, CueingMode::SkiAccel);
  const std::vector<ChannelPair> pairs{{"a_long", "imu_fx"}};
  const auto rep = compare_traces(ref, r.trace, pairs, 20);
  REQUIRE(rep.pairs[0].rho.has_value());
  CHECK(*rep.pairs[0].rho > 0.99);
  CHECK_THROWS_AS(simulate(ref, PlatformConfig{}, CueingMode::BoatPose), ConfigError);
}
