#include "immersia/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "immersia/error.hpp"
#include "immersia/submetrics.hpp"

namespace immersia {

namespace {

constexpr int kMaxAttempts = 32;
constexpr double kNoiseFraction = 0.08;  // white noise sigma relative to the target IQR

struct Band {
  double lo;
  double hi;
};

Band band_for(Activity a) { return a == Activity::Ski ? Band{0.3, 2.0} : Band{0.05, 0.5}; }

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id)};
  return std::mt19937_64(seq);
}

// Uniform draw built from raw engine output so values do not depend on the
// standard library's distribution implementation.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

double gaussian(std::mt19937_64& rng) {
  // Box-Muller.
  double u1 = uniform(rng, 0.0, 1.0);
  while (u1 <= 0.0) u1 = uniform(rng, 0.0, 1.0);
  const double u2 = uniform(rng, 0.0, 1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

std::vector<double> band_signal(std::mt19937_64& rng, Band band, std::size_t n, double rate) {
  const int tones = 3 + static_cast<int>(rng() % 3);
  std::vector<double> freq(tones), amp(tones), phase(tones);
  for (int k = 0; k < tones; ++k) {
    freq[k] = uniform(rng, band.lo, band.hi);
    amp[k] = uniform(rng, 0.5, 1.0);
    phase[k] = uniform(rng, 0.0, 2.0 * kPi);
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    for (int k = 0; k < tones; ++k) out[i] += amp[k] * std::sin(2.0 * kPi * freq[k] * t + phase[k]);
  }
  return out;
}

std::vector<double> generate_channel(const ChannelBlueprint& bp, double scale, std::uint64_t seed, std::uint64_t id,
                                     Band band, std::size_t n, double rate, const std::string& condition,
                                     double& achieved) {
  const double target = bp.nominal_iqr * scale;
  if (target == 0.0) {
    achieved = 0.0;
    return std::vector<double>(n, bp.offset);
  }
  auto rng = stream(seed, id);
  auto base = band_signal(rng, band, n, rate);
  const double base_iqr = quartiles(base).iqr();
  if (!(base_iqr > 0.0)) throw GenerationError("degenerate base signal for channel '" + bp.name + "'");
  for (auto& v : base) v *= target / base_iqr;

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = bp.offset + base[i] + kNoiseFraction * target * gaussian(rng);
    achieved = quartiles(x).iqr();
    if (std::abs(achieved - target) > kIqrTolerance * target) continue;
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (*lo < bp.lower || *hi > bp.upper) {
      throw GenerationError("infeasible variability target for '" + bp.name + "' in condition '" + condition +
                            "': signal leaves [" + std::to_string(bp.lower) + ", " + std::to_string(bp.upper) +
                            "]");
    }
    return x;
  }
  throw GenerationError("could not meet the IQR target for '" + bp.name + "' in condition '" + condition + "'");
}

MotionTrace generate_condition(const ScenarioSpec& spec, const ConditionProfile& profile, const std::string& label,
                               std::size_t n, std::vector<TargetCheck>& checks) {
  const auto& blueprints = scenario_channels(spec.activity);
  std::vector<Channel> channels;
  for (std::size_t c = 0; c < blueprints.size(); ++c) {
    const auto& bp = blueprints[c];
    const double scale = profile.scale_for(bp.name);
    double achieved = 0.0;
    auto values = generate_channel(bp, scale, spec.seed, c, band_for(spec.activity), n, spec.sample_rate, label,
                                   achieved);
    checks.push_back({label, bp.name, bp.nominal_iqr * scale, achieved});
    channels.push_back({bp.name, bp.kind, std::move(values)});
  }
  return MotionTrace(spec.sample_rate, std::move(channels));
}

MotionTrace generate_reference(const ScenarioSpec& spec, std::size_t n) {
  struct Ref {
    const char* name;
    ChannelKind kind;
    double peak;
  };
  const std::vector<Ref> refs =
      spec.activity == Activity::Ski
          ? std::vector<Ref>{{"a_long", ChannelKind::Acceleration, 2.0},
                             {"a_lat", ChannelKind::Acceleration, 1.8},
                             {"a_vert", ChannelKind::Acceleration, 1.0}}
          : std::vector<Ref>{{"roll", ChannelKind::Angle, deg_to_rad(5.0)},
                             {"pitch", ChannelKind::Angle, deg_to_rad(3.0)},
                             {"heave", ChannelKind::Position, 0.02}};
  std::vector<Channel> channels;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    auto rng = stream(spec.seed, 1000 + i);
    auto v = band_signal(rng, band_for(spec.activity), n, spec.sample_rate);
    double peak = 0.0;
    for (double x : v) peak = std::max(peak, std::abs(x));
    for (auto& x : v) x *= refs[i].peak / peak;
    channels.push_back({refs[i].name, refs[i].kind, std::move(v)});
  }
  return MotionTrace(spec.sample_rate, std::move(channels));
}

}  // namespace

std::string_view to_string(Activity activity) { return activity == Activity::Ski ? "ski" : "boat"; }

Activity activity_from_string(std::string_view name) {
  if (name == "ski") return Activity::Ski;
  if (name == "boat") return Activity::Boat;
  throw ConfigError("unknown activity '" + std::string(name) + "'");
}

CueingMode cueing_mode_for(Activity activity) {
  return activity == Activity::Ski ? CueingMode::SkiAccel : CueingMode::BoatPose;
}

double ConditionProfile::scale_for(const std::string& channel) const {
  auto it = channel_scale.find(channel);
  return it == channel_scale.end() ? scale : it->second;
}

void ScenarioSpec::validate() const {
  if (!(duration > 0.0)) throw ConfigError("scenario duration must be positive");
  if (!(sample_rate > 0.0)) throw ConfigError("scenario sample_rate must be positive");
  for (const auto* p : {&ground_truth, &platform, &no_feedback}) {
    if (!(p->scale >= 0.0) || !std::isfinite(p->scale)) throw ConfigError("condition scale must be >= 0");
    for (const auto& [name, s] : p->channel_scale) {
      if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("channel scale for '" + name + "' must be >= 0");
    }
  }
}

const std::vector<ChannelBlueprint>& scenario_channels(Activity activity) {
  static const std::vector<ChannelBlueprint> ski = {
      {"cog_x", ChannelKind::Position, 0.0, 0.05, -1.0, 1.0},
      {"cog_y", ChannelKind::Position, 0.0, 0.08, -1.0, 1.0},
      {"cog_z", ChannelKind::Position, 0.95, 0.06, 0.3, 1.5},
      {"knee_right", ChannelKind::Angle, 2.0, 0.30, 0.0, kPi},
      {"knee_left", ChannelKind::Angle, 2.05, 0.26, 0.0, kPi},
  };
  static const std::vector<ChannelBlueprint> boat = {
      {"cog_x", ChannelKind::Position, 0.0, 0.03, -1.0, 1.0},
      {"cog_y", ChannelKind::Position, 0.0, 0.04, -1.0, 1.0},
      {"cop_x", ChannelKind::Position, 0.0, 0.02, -1.0, 1.0},
      {"cop_y", ChannelKind::Position, 0.0, 0.025, -1.0, 1.0},
      {"cog_chest_feet_angle", ChannelKind::Angle, 2.6, 0.08, 0.0, kPi},
      {"cog_chest_angle", ChannelKind::Angle, 0.25, 0.06, 0.0, kPi},
  };
  return activity == Activity::Ski ? ski : boat;
}

Scenario generate_scenario(const ScenarioSpec& spec) {
  spec.validate();
  const auto n = static_cast<std::size_t>(std::floor(spec.duration * spec.sample_rate + 1e-9)) + 1;
  if (n < 8) throw GenerationError("scenario too short to estimate quartiles");
  std::vector<TargetCheck> checks;
  auto gt = generate_condition(spec, spec.ground_truth, "ground_truth", n, checks);
  auto pl = generate_condition(spec, spec.platform, "platform", n, checks);
  auto nf = generate_condition(spec, spec.no_feedback, "no_feedback", n, checks);
  return {std::move(gt), std::move(pl), std::move(nf), generate_reference(spec, n), std::move(checks)};
}

}  // namespace immersia
