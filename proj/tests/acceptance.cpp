// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "immersia/cueing.hpp"
#include "immersia/error.hpp"
#include "immersia/gyration.hpp"
#include "immersia/pipeline.hpp"
#include "immersia/platform.hpp"
#include "immersia/submetrics.hpp"
#include "immersia/synth.hpp"
#include "immersia/validation.hpp"
#include "oracles.hpp"

using namespace immersia;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void run(const std::string& name, double time_limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit_s > 0 && secs >= time_limit_s) {
    o.pass = false;
    o.detail += " [over time limit " + std::to_string(time_limit_s) + " s]";
  }
  if (!o.pass) ++failures;
  std::printf("%s  %-28s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

GyrationCircle circle_at(double x, double y, double r) {
  GyrationCircle c;
  c.center = {x, y};
  c.radius = r;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ---------------------------------------------------------------------------

Outcome gyration_fidelity() {
  Outcome o;
  const auto sq = gyration_circle(RadarPolygon({1, 1, 1, 1}));
  const double e_sq = std::max({std::abs(sq.moment - 4), std::abs(sq.area - 2), std::abs(sq.radius - std::sqrt(2.0)),
                                std::abs(sq.center.x), std::abs(sq.center.y)});
  const auto tri = gyration_circle(RadarPolygon({1, 1, 1}));
  const double e_tri = std::abs(tri.radius - std::sqrt(4.0 / std::sqrt(3.0)));

  // Same cases end to end: channels whose IQR is exactly 1.
  const std::vector<double> unit_iqr{0.0, 0.5, 1.0, 1.5, 2.0};
  auto through_pipeline = [&](int n) {
    std::vector<Channel> ch;
    std::vector<SubmetricSpec> specs;
    for (int i = 0; i < n; ++i) {
      const std::string name = "c" + std::to_string(i);
      ch.push_back({name, ChannelKind::Angle, unit_iqr});
      specs.push_back({name, 1, {name}, i});
    }
    return analyze_condition(MotionTrace(10.0, ch), specs, "x").circle;
  };
  const auto sq_p = through_pipeline(4);
  const auto tri_p = through_pipeline(3);
  const double e_pipe = std::max({std::abs(sq_p.radius - std::sqrt(2.0)), std::abs(sq_p.center.x),
                                  std::abs(sq_p.center.y), std::abs(tri_p.radius - std::sqrt(4.0 / std::sqrt(3.0)))});
  const double worst = std::max({e_sq, e_tri, e_pipe});
  o.pass = worst <= 1e-9;
  o.detail = "max abs error " + fmt("%.3g", worst);
  return o;
}

Outcome index_range() {
  oracle::Rng rng(101);
  int bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto a = circle_at(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0.0, 4.0));
    const auto b = circle_at(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0.0, 4.0));
    const double idx = immersion_index(a, b);
    if (!(idx >= 0.0 && idx <= 100.0)) ++bad;
    if (immersion_index(a, a) != 100.0) ++bad;
    const double d = a.radius + b.radius + rng.uniform(0.0, 3.0);
    const auto far = circle_at(a.center.x + d, a.center.y, b.radius);
    if (immersion_index(a, far) != 0.0) ++bad;
  }
  return {bad == 0, std::to_string(bad) + " violations over 10000 random pairs (range, identical=100, disjoint=0)"};
}

Outcome lens_monte_carlo() {
  oracle::Rng rng(102);
  double worst = 0;
  int done = 0;
  while (done < 100) {
    const double r1 = rng.uniform(0.2, 3.0), r2 = rng.uniform(0.2, 3.0);
    const double d = rng.uniform(0.0, r1 + r2);
    const double th = rng.uniform(0, 2 * std::numbers::pi);
    const Point2 c1{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const Point2 c2{c1.x + d * std::cos(th), c1.y + d * std::sin(th)};
    const double exact = circle_intersection_area(c1, r1, c2, r2);
    // Overlapping pairs with a lens big enough for 1e7 samples to resolve 0.5 %.
    if (exact < 0.05 * std::numbers::pi * std::min(r1, r2) * std::min(r1, r2)) continue;
    const double mc = oracle::monte_carlo_lens({{c1.x, c1.y}, r1}, {{c2.x, c2.y}, r2}, 10'000'000,
                                               1000 + static_cast<std::uint64_t>(done));
    worst = std::max(worst, std::abs(exact - mc) / exact);
    ++done;
  }
  return {worst <= 0.005, "worst relative error " + fmt("%.4f", 100 * worst) + " % over 100 pairs x 1e7 samples"};
}

Outcome mec_oracle() {
  oracle::Rng rng(103);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const auto cloud = oracle::random_cloud(rng, rng.integer(1, 39));
    std::vector<Point2> pts;
    for (auto p : cloud) pts.push_back({p.x, p.y});
    worst = std::max(worst, std::abs(min_enclosing_circle(pts).radius - oracle::brute_force_mec(cloud).r));
  }
  return {worst <= 1e-9, "max radius difference " + fmt("%.3g", worst) + " over 200 sets (n <= 40)"};
}

Outcome quartile_oracle() {
  oracle::Rng rng(104);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto v = oracle::random_sequence(rng, rng.integer(4, 80));
    const auto q = quartiles(v);
    if (q.q1 != oracle::quantile(v, 0.25) || q.q3 != oracle::quantile(v, 0.75)) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " inexact results over 1000 sequences (ties, constants)"};
}

Outcome scale_invariance() {
  oracle::Rng rng(105);
  double worst_r = 0, worst_c = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> values(static_cast<std::size_t>(rng.integer(3, 12)));
    for (auto& v : values) v = rng.uniform(0.01, 10.0);
    const auto base = gyration_circle(RadarPolygon(values));
    for (double k : {0.1, 2.0, 10.0}) {
      auto scaled = values;
      for (auto& v : scaled) v *= k;
      const auto g = gyration_circle(RadarPolygon(scaled));
      worst_r = std::max(worst_r, std::abs(g.radius - base.radius));
      const double norm = std::max(1.0, std::hypot(base.center.x, base.center.y)) * k;
      worst_c = std::max(worst_c, std::hypot(g.center.x - k * base.center.x, g.center.y - k * base.center.y) / norm);
    }
  }
  return {worst_r <= 1e-9 && worst_c <= 1e-12,
          "max |dr| " + fmt("%.3g", worst_r) + ", max relative centroid error " + fmt("%.3g", worst_c)};
}

Outcome spearman_oracle() {
  oracle::Rng rng(106);
  double worst = 0;
  int rank_mismatch = 0, checked = 0;
  while (checked < 1000) {
    const int n = rng.integer(3, 100);
    std::vector<double> x(static_cast<std::size_t>(n)), y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = static_cast<double>(rng.integer(0, 8));
      y[i] = rng.integer(0, 1) ? x[i] + static_cast<double>(rng.integer(-2, 2)) : rng.normal();
    }
    double rho;
    try {
      rho = spearman(x, y);
    } catch (const UndefinedCorrelationError&) {
      continue;
    }
    ++checked;
    worst = std::max(worst, std::abs(rho - oracle::spearman(x, y)));
    std::vector<double> fx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) fx[i] = std::exp(0.5 * x[i]) - 7.0;
    if (average_ranks(fx) != average_ranks(x) || spearman(fx, y) != rho) ++rank_mismatch;
  }
  return {worst <= 1e-12 && rank_mismatch == 0,
          "max |drho| " + fmt("%.3g", worst) + ", " + std::to_string(rank_mismatch) +
              " monotone-transform mismatches over 1000 tied pairs"};
}

Outcome tilt_contract() {
  const PoseLimits limits;
  const double g = kGravity;
  const double amax = g * std::sin(limits.pitch_max);
  oracle::Rng rng(107);
  double worst = 0;
  for (int i = 0; i < 100000; ++i) {
    const double a = rng.uniform(-amax, amax);
    worst = std::max(worst, std::abs(g * std::sin(tilt_coordination({a, 0, 0}, g, limits).pitch) - a));
  }
  worst = std::max(worst, std::abs(g * std::sin(tilt_coordination({amax, 0, 0}, g, limits).pitch) - amax));
  bool saturated = true;
  for (double a : {amax * 1.0000001, amax * 2, 100.0}) {
    saturated = saturated && tilt_coordination({a, 0, 0}, g, limits).pitch == limits.pitch_max &&
                tilt_coordination({-a, 0, 0}, g, limits).pitch == -limits.pitch_max &&
                tilt_coordination({0, -a, 0}, g, limits).roll == limits.roll_max;
  }
  return {worst <= 1e-9 && saturated,
          "max |g sin(pitch) - a| " + fmt("%.3g", worst) + (saturated ? ", saturation exact" : ", saturation inexact")};
}

MotionTrace boat_trace(double seconds, const std::function<double(double)>& roll) {
  const double rate = 100.0;
  const auto n = static_cast<std::size_t>(seconds * rate) + 1;
  std::vector<double> r(n), z(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) r[i] = roll(static_cast<double>(i) / rate);
  return MotionTrace(rate, {{"roll", ChannelKind::Angle, r}, {"pitch", ChannelKind::Angle, z},
                            {"heave", ChannelKind::Position, z}});
}

Outcome platform_tracking() {
  const PlatformConfig cfg;
  const double amp = deg_to_rad(5.0), w = 2 * std::numbers::pi * 0.2;
  double worst_run = 0;
  auto timed = [&](const MotionTrace& ref) {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = simulate(ref, cfg, CueingMode::BoatPose);
    worst_run = std::max(worst_run, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return r;
  };

  const auto ref = boat_trace(30.0, [&](double t) { return amp * std::sin(w * t); });
  const auto sine = timed(ref);
  const auto roll = sine.trace.values("roll");
  double ss = 0, sc = 0, cc = 0, ys = 0, yc = 0;
  for (std::size_t i = 500; i < roll.size(); ++i) {  // skip the first 5 s
    const double t = sine.trace.time_at(i), s = std::sin(w * t), c = std::cos(w * t);
    ss += s * s;
    sc += s * c;
    cc += c * c;
    ys += roll[i] * s;
    yc += roll[i] * c;
  }
  const double det = ss * cc - sc * sc;
  const double gain = std::hypot((ys * cc - yc * sc) / det, (yc * ss - ys * sc) / det) / amp;
  const std::vector<ChannelPair> pairs{{"roll", "roll"}};
  const double rho = compare_traces(ref, sine.trace, pairs, 50).pairs[0].rho.value_or(-2.0);

  // 5 deg roll step at t = 0.5 s; settling measured from the step.
  const double target = amp;
  const auto step = timed(boat_trace(3.0, [&](double t) { return t >= 0.5 ? target : 0.0; }));
  double settle = 0;
  const auto y = step.full_rate.values("roll");
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double t = step.full_rate.time_at(i);
    if (t >= 0.5 && std::abs(y[i] - target) > 0.02 * target) settle = t - 0.5 + 1.0 / cfg.sim_rate;
  }
  const double vmax = std::max(sine.max_leg_speed, step.max_leg_speed);

  const bool pass = gain >= 0.95 && rho >= 0.99 && vmax <= 0.120 && settle <= 0.5 && worst_run < 10.0;
  return {pass, "gain " + fmt("%.4f", gain) + ", rho " + fmt("%.5f", rho) + ", peak leg speed " +
                    fmt("%.4f", vmax) + " m/s, 2% settling " + fmt("%.3f", settle) + " s, slowest run " +
                    fmt("%.2f", worst_run) + " s"};
}

Outcome monotonicity() {
  int violations = 0;
  double min_gap = 1e9;
  for (auto activity : {Activity::Ski, Activity::Boat}) {
    const auto specs = submetric_preset(to_string(activity));
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      ScenarioSpec s;
      s.activity = activity;
      s.seed = seed;
      const auto sc = generate_scenario(s);
      const auto gt = analyze_condition(sc.ground_truth, specs, "gt").circle;
      const double pl = immersion_index(analyze_condition(sc.platform, specs, "pl").circle, gt);
      const double nf = immersion_index(analyze_condition(sc.no_feedback, specs, "nf").circle, gt);
      if (!(pl > nf)) ++violations;
      min_gap = std::min(min_gap, pl - nf);
    }
  }
  return {violations == 0, std::to_string(violations) +
                               " ordering violations over 20 seeds x {ski, boat} (scales 1.0/0.8/0.4), smallest "
                               "gap " + fmt("%.4f", min_gap) + " points"};
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "immersia_acceptance";
  fs::remove_all(root);
  std::vector<fs::path> runs{root / "run1", root / "run2"};
  const fs::path data = root / "data";
  for (auto activity : {"ski", "boat"}) {
    AnalysisConfig cfg = parse_config(nlohmann::json::object());
    cfg.apply_preset(activity);
    cfg.scenario.duration = 30.0;
    cfg.scenario.seed = 7;
    cfg.platform.imu_noise_sigma = 0.02;
    cfg.platform.seed = 3;
    for (const auto& run : runs) {
      const auto d = run / activity;
      cmd_synth(cfg, d / "data");
      cmd_index(cfg, {d / "data" / "rgt.csv", {d / "data" / "pl.csv", d / "data" / "nf.csv"}}, d / "index");
      cmd_simulate(cfg, d / "data" / "reference_motion.csv", d / "sim");
    }
  }
  std::size_t files = 0, differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(runs[0])) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), runs[0]);
    ++files;
    std::string a = slurp(entry.path()), b = slurp(runs[1] / rel);
    // Reports echo input paths; normalize the run directory before comparing.
    for (auto* s : {&a, &b}) {
      for (const auto& run : runs) {
        const auto needle = run.generic_string();
        for (auto pos = s->find(needle); pos != std::string::npos; pos = s->find(needle, pos)) {
          s->replace(pos, needle.size(), "RUN");
        }
      }
    }
    if (a != b) ++differing;
  }
  return {differing == 0 && files >= 20,
          std::to_string(differing) + " of " + std::to_string(files) + " report/SVG/CSV files differ between runs"};
}

}  // namespace

int main() {
  std::printf("immersia acceptance suite\n");
  run("gyration fidelity", 1.0, gyration_fidelity);
  run("index range contract", 0, index_range);
  run("lens area vs Monte Carlo", 60.0, lens_monte_carlo);
  run("MEC vs brute force", 30.0, mec_oracle);
  run("quartile oracle", 0, quartile_oracle);
  run("scale invariance", 0, scale_invariance);
  run("Spearman oracle", 0, spearman_oracle);
  run("tilt coordination", 0, tilt_contract);
  run("platform tracking", 0, platform_tracking);
  run("end-to-end monotonicity", 0, monotonicity);
  run("determinism", 0, determinism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
