#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "immersia/cueing.hpp"
#include "immersia/trace.hpp"

namespace immersia {

enum class Activity { Ski, Boat };

std::string_view to_string(Activity activity);
Activity activity_from_string(std::string_view name);
CueingMode cueing_mode_for(Activity activity);

// Multiplies the nominal per-channel variability of one condition. A scale of
// zero yields constant channels.
struct ConditionProfile {
  double scale = 1.0;
  std::map<std::string, double> channel_scale;  // overrides `scale` per channel

  double scale_for(const std::string& channel) const;
};

struct ScenarioSpec {
  Activity activity = Activity::Ski;
  double duration = 60.0;  // s
  double sample_rate = 100.0;
  std::uint64_t seed = 42;
  ConditionProfile ground_truth{1.0, {}};
  ConditionProfile platform{0.8, {}};
  ConditionProfile no_feedback{0.4, {}};

  void validate() const;
};

struct TargetCheck {
  std::string condition;
  std::string channel;
  double target_iqr = 0.0;
  double achieved_iqr = 0.0;
};

struct Scenario {
  MotionTrace ground_truth;
  MotionTrace platform;
  MotionTrace no_feedback;
  // ski: a_long/a_lat/a_vert; boat: roll/pitch/heave.
  MotionTrace reference;
  std::vector<TargetCheck> checks;
};

// Relative IQR tolerance enforced on every generated channel.
inline constexpr double kIqrTolerance = 0.05;

struct ChannelBlueprint {
  std::string name;
  ChannelKind kind;
  double offset;
  double nominal_iqr;
  double lower;
  double upper;
};

const std::vector<ChannelBlueprint>& scenario_channels(Activity activity);

// Deterministic given the scenario settings. Each channel is a sum of 3-5 random-phase
// sinusoids in the activity band plus white noise, rejection-checked so its
// IQR lands within 5% of nominal * scale. Conditions share the scenario seed.
// Throws GenerationError when a target cannot be met within channel bounds.
Scenario generate_scenario(const ScenarioSpec& spec);

}  // namespace immersia
