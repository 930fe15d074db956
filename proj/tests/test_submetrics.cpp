#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "immersia/error.hpp"
#include "immersia/submetrics.hpp"
#include "oracles.hpp"

using namespace immersia;

namespace {

std::vector<Point2> to_points(const std::vector<oracle::Pt>& p) {
  std::vector<Point2> out;
  for (auto q : p) out.push_back({q.x, q.y});
  return out;
}

MotionTrace trace_of(std::vector<Channel> channels) { return MotionTrace(100.0, std::move(channels)); }

}  // namespace

TEST_CASE("quartiles of 1..5") {
  const std::vector<double> v{1, 2, 3, 4, 5};
  const auto q = quartiles(v);
  CHECK(q.q1 == 2.0);
  CHECK(q.q3 == 4.0);
  CHECK(q.iqr() == 2.0);
}

TEST_CASE("quartiles interpolate between order statistics") {
  const std::vector<double> v{4, 1, 3, 2};
  const auto q = quartiles(v);
  CHECK(q.q1 == 1.75);
  CHECK(q.q3 == 3.25);
}

TEST_CASE("quartiles need four values") {
  const std::vector<double> v{1, 2, 3};
  CHECK_THROWS_AS(quartiles(v), InsufficientDataError);
}

TEST_CASE("quartiles match the counting oracle and are permutation invariant") {
  oracle::Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    auto v = oracle::random_sequence(rng, rng.integer(4, 60));
    const auto q = quartiles(v);
    CHECK(q.q1 == oracle::quantile(v, 0.25));
    CHECK(q.q3 == oracle::quantile(v, 0.75));
    std::reverse(v.begin(), v.end());
    const auto r = quartiles(v);
    CHECK(r.q1 == q.q1);
    CHECK(r.q3 == q.q3);
  }
}

TEST_CASE("IQR is shift invariant and scales with |a|") {
  oracle::Rng rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    auto v = oracle::random_sequence(rng, rng.integer(4, 40));
    const double a = rng.uniform(-4, 4), b = rng.uniform(-10, 10);
    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = a * v[i] + b;
    const double base = quartiles(v).iqr();
    CHECK(quartiles(w).iqr() == doctest::Approx(std::abs(a) * base).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("MEC of known configurations") {
  const std::vector<Point2> square{{0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}};
  const auto c = min_enclosing_circle(square);
  CHECK(c.center.x == doctest::Approx(1.0));
  CHECK(c.center.y == doctest::Approx(1.0));
  CHECK(c.radius == doctest::Approx(std::sqrt(2.0)));

  const std::vector<Point2> single{{3, 4}};
  CHECK(min_enclosing_circle(single).radius == 0.0);

  const std::vector<Point2> line{{0, 0}, {1, 1}, {4, 4}, {2, 2}};
  CHECK(min_enclosing_circle(line).radius == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK_THROWS_AS(min_enclosing_circle(std::vector<Point2>{}), ArgumentError);
}

TEST_CASE("MEC of a dense unit-circle cloud has radius 1") {
  std::vector<Point2> pts;
  for (int i = 0; i < 720; ++i) {
    const double th = 2 * std::numbers::pi * i / 720.0;
    pts.push_back({std::cos(th), std::sin(th)});
  }
  const auto c = min_enclosing_circle(pts);
  CHECK(std::abs(c.radius - 1.0) < 1e-6);
}

TEST_CASE("MEC matches brute force and contains every point") {
  oracle::Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const auto cloud = oracle::random_cloud(rng, rng.integer(1, 25));
    const auto pts = to_points(cloud);
    const auto c = min_enclosing_circle(pts);
    CHECK(std::abs(c.radius - oracle::brute_force_mec(cloud).r) <= 1e-9);
    for (const auto& p : pts) CHECK(distance(c.center, p) <= c.radius + 1e-9);

    // Invariant under reordering, translation and rotation.
    auto shuffled = pts;
    std::reverse(shuffled.begin(), shuffled.end());
    CHECK(std::abs(min_enclosing_circle(shuffled).radius - c.radius) <= 1e-9);
    std::vector<Point2> moved;
    const double th = rng.uniform(0, 6.28);
    for (const auto& p : pts) {
      moved.push_back({std::cos(th) * p.x - std::sin(th) * p.y + 5.0, std::sin(th) * p.x + std::cos(th) * p.y - 3.0});
    }
    CHECK(std::abs(min_enclosing_circle(moved).radius - c.radius) <= 1e-9);
  }
}

TEST_CASE("evaluate_submetric uses IQR for 1D and MEC radius for 2D") {
  std::vector<double> x{0, 1, 0, -1, 0}, y{1, 0, -1, 0, 0}, r{0, 1, 2, 3, 4};
  const auto t = trace_of(
      {{"x", ChannelKind::Position, x}, {"y", ChannelKind::Position, y}, {"r", ChannelKind::Position, r}});
  const auto one = evaluate_submetric(t, {"r_rom", 1, {"r"}, 0});
  CHECK(one.value == 2.0);
  CHECK(one.unit == "m");
  REQUIRE(one.quartiles.has_value());
  const auto two = evaluate_submetric(t, {"sway", 2, {"x", "y"}, 1});
  CHECK(two.value == doctest::Approx(1.0));
  REQUIRE(two.mec_center.has_value());
  CHECK_THROWS_AS(evaluate_submetric(t, {"bad", 2, {"x"}, 0}), ConfigError);
  CHECK_THROWS_AS(evaluate_submetric(t, {"missing", 1, {"z"}, 0}), ConfigError);
}

TEST_CASE("values come back in axis order") {
  std::vector<double> a{0, 1, 2, 3, 4}, b{0, 2, 4, 6, 8}, c{0, 3, 6, 9, 12};
  const auto t = trace_of({{"a", ChannelKind::Angle, a}, {"b", ChannelKind::Angle, b}, {"c", ChannelKind::Angle, c}});
  const std::vector<SubmetricSpec> specs{{"c", 1, {"c"}, 2}, {"a", 1, {"a"}, 0}, {"b", 1, {"b"}, 1}};
  const auto v = evaluate_submetrics(t, specs);
  REQUIRE(v.size() == 3);
  CHECK(v[0].name == "a");
  CHECK(v[1].value == 4.0);
  CHECK(v[2].value == 6.0);
}

TEST_CASE("spec set validation") {
  CHECK_NOTHROW(validate_spec_set(submetric_preset("ski")));
  CHECK_NOTHROW(validate_spec_set(submetric_preset("boat")));
  const std::vector<SubmetricSpec> gap{{"a", 1, {"a"}, 0}, {"b", 1, {"b"}, 2}};
  CHECK_THROWS_AS(validate_spec_set(gap), ConfigError);
  const std::vector<SubmetricSpec> dup{{"a", 1, {"a"}, 0}, {"a", 1, {"b"}, 1}};
  CHECK_THROWS_AS(validate_spec_set(dup), ConfigError);
  CHECK_THROWS_AS(submetric_preset("golf"), ConfigError);
}
