#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "immersia/cueing.hpp"
#include "immersia/kinematics.hpp"
#include "immersia/platform.hpp"
#include "immersia/submetrics.hpp"
#include "immersia/synth.hpp"
#include "immersia/validation.hpp"

namespace immersia {

// A channel derivation applied to every trace before submetric evaluation.
//   joint_angle:    markers = {proximal, joint, distal}
//   vector_angle:   u = {from, to}, v = {from, to}
//   cog:            weights (falls back to cog_weights); skipped when the
//                   trace already carries <name>_x/_y/_z
//   differentiate:  source channel, order 1 or 2, uses the smoothing config
struct DeriveStep {
  std::string op;
  std::string name;
  std::vector<std::string> markers;
  std::vector<std::string> u;
  std::vector<std::string> v;
  std::string source;
  int order = 2;
  std::map<std::string, double> weights;
};

struct ValidationConfig {
  int max_lag = 50;
  std::vector<ChannelPair> pairs;
  std::optional<TimeWindow> window;
};

struct AnalysisConfig {
  std::string preset;
  std::optional<std::filesystem::path> schema;
  std::vector<SubmetricSpec> submetrics;
  std::vector<DeriveStep> derive;
  SmoothingConfig smoothing;
  std::map<std::string, double> cog_weights;
  std::optional<CueingMode> mode;
  PlatformConfig platform;
  ScenarioSpec scenario;
  ValidationConfig validation;
  std::filesystem::path output_dir = "out";

  // Applies a preset: submetric set, scenario activity and cueing mode.
  void apply_preset(const std::string& name);
  // Throws ConfigError on an inconsistent configuration.
  void validate() const;
};

AnalysisConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
AnalysisConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const AnalysisConfig& config);

// Runs the derivation steps and returns the trace with the new channels.
MotionTrace apply_derivations(const MotionTrace& trace, const AnalysisConfig& config);

}  // namespace immersia
