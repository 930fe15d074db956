#pragma once

#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "immersia/config.hpp"
#include "immersia/gyration.hpp"
#include "immersia/submetrics.hpp"
#include "immersia/trace.hpp"

namespace immersia {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitRuntime = 3;

int exit_code_for(const std::exception& e) noexcept;

struct ConditionAnalysis {
  std::string label;
  std::string origin;
  std::vector<SubmetricValue> values;
  RadarPolygon polygon;
  GyrationCircle circle;
};

// Submetrics -> radar polygon -> gyration circle for one condition trace.
ConditionAnalysis analyze_condition(const MotionTrace& trace, const std::vector<SubmetricSpec>& specs,
                                    std::string label, std::string origin = {});

struct LabeledTrace {
  std::string label;
  std::filesystem::path file;
  MotionTrace trace;
  std::string origin;
};

// Index report comparing each condition against the reference condition.
nlohmann::json build_index_report(const AnalysisConfig& config, const LabeledTrace& reference,
                                  const std::vector<LabeledTrace>& conditions, std::string* svg_out = nullptr,
                                  std::string* table_out = nullptr);

struct IndexInputs {
  std::filesystem::path reference;
  std::vector<std::filesystem::path> conditions;
};

// Each command writes its files under out_dir and returns the JSON report.
nlohmann::json cmd_index(const AnalysisConfig& config, const IndexInputs& inputs,
                         const std::filesystem::path& out_dir);
nlohmann::json cmd_simulate(const AnalysisConfig& config, const std::filesystem::path& reference,
                            const std::filesystem::path& out_dir);
nlohmann::json cmd_synth(const AnalysisConfig& config, const std::filesystem::path& out_dir);
nlohmann::json cmd_validate(const AnalysisConfig& config, const std::filesystem::path& a,
                            const std::filesystem::path& b, const std::filesystem::path& out_dir);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string dump_report(const nlohmann::json& report);

}  // namespace immersia
