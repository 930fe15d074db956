#include "immersia/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "immersia/error.hpp"
#include "immersia/platform.hpp"
#include "immersia/svg.hpp"
#include "immersia/synth.hpp"
#include "immersia/validation.hpp"

namespace immersia {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kSyntheticOrigin = "synthetic";

LabeledTrace load_labeled(const fs::path& path, const AnalysisConfig& config) {
  auto loaded = load_trace(path, config.schema ? std::optional<TraceSchema>(read_schema(*config.schema))
                                               : std::nullopt);
  return {path.stem().string(), path, apply_derivations(loaded.trace, config), loaded.schema.origin};
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

json value_json(const SubmetricValue& v) {
  json j = {{"name", v.name}, {"axis_index", v.axis_index}, {"dimensionality", v.dimensionality},
            {"value", v.value}, {"unit", v.unit}};
  if (v.quartiles) {
    j["q1"] = v.quartiles->q1;
    j["q3"] = v.quartiles->q3;
  }
  if (v.mec_center) j["mec_center"] = point_json(*v.mec_center);
  return j;
}

// Config echo for reports. The output directory is omitted so reruns into
// different directories produce identical bytes.
json report_config(const AnalysisConfig& config) {
  json j = config_to_json(config);
  j.erase("output_dir");
  return j;
}

json circle_json(const ConditionAnalysis& a) {
  return {{"centroid", point_json(a.circle.center)},
          {"moment", a.circle.moment},
          {"area", a.circle.area},
          {"radius", a.circle.radius},
          {"degenerate", a.circle.degenerate}};
}

json correlation_json(const CorrelationReport& report) {
  json pairs = json::array();
  for (const auto& p : report.pairs) {
    pairs.push_back({{"a", p.channels.a},
                     {"b", p.channels.b},
                     {"rho", p.rho ? json(*p.rho) : json(nullptr)},
                     {"defined", p.rho.has_value()},
                     {"lag_samples", p.lag},
                     {"samples", p.samples}});
  }
  return {{"method", "spearman, average ranks for ties"},
          {"sample_rate_hz", report.sample_rate},
          {"max_lag", report.max_lag},
          {"pairs", std::move(pairs)}};
}

std::string overlay_svg(const std::string& title, const MotionTrace& a, const std::string& ca, const MotionTrace& b,
                        const std::string& cb) {
  auto series = [](const MotionTrace& tr, const std::string& name, std::string label) {
    PlotSeries s{std::move(label), {}, {}};
    const auto v = tr.values(name);
    for (std::size_t i = 0; i < tr.length(); ++i) {
      s.t.push_back(tr.time_at(i));
      s.y.push_back(v[i]);
    }
    return s;
  };
  return render_timeseries_svg(title, ca + " / " + cb, {series(a, ca, "reference " + ca), series(b, cb, "measured " + cb)});
}

CueingMode resolve_mode(const AnalysisConfig& config, const MotionTrace& reference) {
  if (config.mode) return *config.mode;
  if (reference.has_channel("a_long")) return CueingMode::SkiAccel;
  if (reference.has_channel("roll")) return CueingMode::BoatPose;
  throw ConfigError("cannot infer the cueing mode: reference has neither a_long nor roll channels");
}

}  // namespace

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ArgumentError*>(&e) ||
      dynamic_cast<const IngestionError*>(&e) || dynamic_cast<const InsufficientDataError*>(&e) ||
      dynamic_cast<const DegenerateGeometryError*>(&e)) {
    return kExitInput;
  }
  return kExitRuntime;
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

ConditionAnalysis analyze_condition(const MotionTrace& trace, const std::vector<SubmetricSpec>& specs,
                                    std::string label, std::string origin) {
  auto values = evaluate_submetrics(trace, specs);
  std::vector<double> radii;
  radii.reserve(values.size());
  for (const auto& v : values) radii.push_back(v.value);
  RadarPolygon poly(std::move(radii));
  auto circle = gyration_circle(poly, label);
  return {std::move(label), std::move(origin), std::move(values), std::move(poly), std::move(circle)};
}

json build_index_report(const AnalysisConfig& config, const LabeledTrace& reference,
                        const std::vector<LabeledTrace>& conditions, std::string* svg_out, std::string* table_out) {
  if (config.submetrics.empty()) throw ConfigError("no submetrics configured; pass --preset or a config file");
  if (conditions.empty()) throw ConfigError("at least one --cond trace is required");
  std::set<std::string> labels{reference.label};
  for (const auto& c : conditions) {
    if (!labels.insert(c.label).second) throw ConfigError("duplicate condition label '" + c.label + "'");
  }

  std::vector<ConditionAnalysis> analyses;
  analyses.push_back(analyze_condition(reference.trace, config.submetrics, reference.label, reference.origin));
  for (const auto& c : conditions) {
    analyses.push_back(analyze_condition(c.trace, config.submetrics, c.label, c.origin));
  }

  json axes = json::array();
  for (const auto& v : analyses.front().values) {
    const auto& spec = *std::find_if(config.submetrics.begin(), config.submetrics.end(),
                                     [&](const SubmetricSpec& s) { return s.name == v.name; });
    axes.push_back({{"axis_index", v.axis_index}, {"name", v.name}, {"unit", v.unit},
                    {"dimensionality", v.dimensionality}, {"sources", spec.sources}});
  }

  json conds = json::array();
  bool any_degenerate = false;
  bool synthetic = false;
  auto add_condition = [&](const ConditionAnalysis& a, const fs::path& file, bool is_reference) {
    json values = json::array();
    for (const auto& v : a.values) values.push_back(value_json(v));
    json c = {{"label", a.label}, {"file", file.generic_string()}, {"role", is_reference ? "reference" : "test"},
              {"origin", a.origin}, {"values", std::move(values)}, {"gyration_circle", circle_json(a)}};
    conds.push_back(std::move(c));
    any_degenerate = any_degenerate || a.circle.degenerate;
    synthetic = synthetic || a.origin == kSyntheticOrigin;
  };
  add_condition(analyses[0], reference.file, true);
  for (std::size_t i = 0; i < conditions.size(); ++i) add_condition(analyses[i + 1], conditions[i].file, false);

  json comparisons = json::array();
  for (std::size_t i = 1; i < analyses.size(); ++i) {
    const auto r = compare_circles(analyses[i].circle, analyses[0].circle);
    any_degenerate = any_degenerate || r.degenerate;
    comparisons.push_back({{"test", analyses[i].label},
                           {"reference", analyses[0].label},
                           {"center_distance", r.center_distance},
                           {"intersection_area", r.intersection_area},
                           {"union_area", r.union_area},
                           {"index_percent", r.index_percent},
                           {"degenerate", r.degenerate}});
  }

  json report = {{"command", "index"},
                 {"quartile_rule", kQuartileRule},
                 {"radar_axes", std::move(axes)},
                 {"conditions", std::move(conds)},
                 {"comparisons", std::move(comparisons)},
                 {"degenerate_geometry", any_degenerate},
                 {"data_origin", synthetic ? "synthetic fixtures, not experimental recordings" : "as supplied"},
                 {"config", report_config(config)}};

  if (svg_out) {
    std::vector<std::string> axis_labels;
    for (const auto& v : analyses.front().values) axis_labels.push_back(v.name + " [" + v.unit + "]");
    std::vector<RadarSeries> series;
    for (const auto& a : analyses) series.push_back({a.label, a.polygon, a.circle});
    *svg_out = render_radar_svg(axis_labels, series);
  }
  if (table_out) {
    std::string t = "condition,axis_index,name,unit,value,q1,q3,mec_center_x,mec_center_y\n";
    for (const auto& a : analyses) {
      for (const auto& v : a.values) {
        t += a.label + "," + std::to_string(v.axis_index) + "," + v.name + "," + v.unit + "," +
             format_double(v.value) + ",";
        t += v.quartiles ? format_double(v.quartiles->q1) + "," + format_double(v.quartiles->q3) : std::string(",");
        t += ",";
        t += v.mec_center ? format_double(v.mec_center->x) + "," + format_double(v.mec_center->y)
                          : std::string(",");
        t += "\n";
      }
    }
    *table_out = std::move(t);
  }
  return report;
}

json cmd_index(const AnalysisConfig& config, const IndexInputs& inputs, const fs::path& out_dir) {
  const auto reference = load_labeled(inputs.reference, config);
  std::vector<LabeledTrace> conditions;
  for (const auto& p : inputs.conditions) conditions.push_back(load_labeled(p, config));
  std::string svg, table;
  auto report = build_index_report(config, reference, conditions, &svg, &table);
  write_text_file(out_dir / "index_report.json", dump_report(report));
  write_text_file(out_dir / "submetrics.csv", table);
  write_text_file(out_dir / "radar.svg", svg);
  return report;
}

json cmd_simulate(const AnalysisConfig& config, const fs::path& reference_path, const fs::path& out_dir) {
  auto loaded = load_trace(reference_path, config.schema ? std::optional<TraceSchema>(read_schema(*config.schema))
                                                         : std::nullopt);
  const auto& reference = loaded.trace;
  const auto mode = resolve_mode(config, reference);
  const auto result = simulate(reference, config.platform, mode);

  std::vector<ChannelPair> pairs = config.validation.pairs;
  if (pairs.empty()) {
    if (mode == CueingMode::SkiAccel) {
      pairs = {{"a_long", "imu_fx"}, {"a_lat", "imu_fy"}};
    } else {
      pairs = {{"roll", "roll"}, {"pitch", "pitch"}, {"heave", "heave"}};
    }
  }
  const auto corr = compare_traces(reference, result.trace, pairs, config.validation.max_lag,
                                   config.validation.window);

  write_trace(out_dir / "platform.csv", result.trace, loaded.schema.origin);
  std::vector<Channel> imu;
  for (const char* n : {"imu_fx", "imu_fy", "imu_fz"}) imu.push_back(result.trace.channel(n));
  write_trace(out_dir / "imu.csv", MotionTrace(result.trace.sample_rate(), imu, result.trace.start_time()),
              loaded.schema.origin);
  write_text_file(out_dir / "tracking.svg",
                  overlay_svg("platform tracking", reference, pairs.front().a, result.trace, pairs.front().b));

  json report = {{"command", "simulate"},
                 {"mode", std::string(to_string(mode))},
                 {"reference_file", reference_path.generic_string()},
                 {"reference_origin", loaded.schema.origin},
                 {"steps", result.steps},
                 {"sim_rate_hz", config.platform.sim_rate},
                 {"max_leg_speed_ms", result.max_leg_speed},
                 {"leg_speed_limit_ms", config.platform.max_leg_velocity},
                 {"correlation", correlation_json(corr)},
                 {"config", report_config(config)}};
  if (mode == CueingMode::SkiAccel) {
    // Correlations measured on the physical platform with recorded skiing data.
    report["hardware_context"] = {{"video_vs_platform_x", 0.8},
                                  {"video_vs_platform_y", 0.65},
                                  {"simulation_vs_platform_xy", 0.6}};
  }
  write_text_file(out_dir / "correlation.json", dump_report(report));
  return report;
}

json cmd_synth(const AnalysisConfig& config, const fs::path& out_dir) {
  const auto scenario = generate_scenario(config.scenario);
  write_trace(out_dir / "rgt.csv", scenario.ground_truth, kSyntheticOrigin);
  write_trace(out_dir / "pl.csv", scenario.platform, kSyntheticOrigin);
  write_trace(out_dir / "nf.csv", scenario.no_feedback, kSyntheticOrigin);
  write_trace(out_dir / "reference_motion.csv", scenario.reference, kSyntheticOrigin);
  json checks = json::array();
  for (const auto& c : scenario.checks) {
    checks.push_back({{"condition", c.condition}, {"channel", c.channel}, {"target_iqr", c.target_iqr},
                      {"achieved_iqr", c.achieved_iqr}});
  }
  json report = {{"command", "synth"},
                 {"data_origin", "synthetic fixtures, not experimental recordings"},
                 {"iqr_tolerance", kIqrTolerance},
                 {"files",
                  {{"ground_truth", "rgt.csv"},
                   {"platform", "pl.csv"},
                   {"no_feedback", "nf.csv"},
                   {"reference", "reference_motion.csv"}}},
                 {"checks", std::move(checks)},
                 {"config", report_config(config)}};
  write_text_file(out_dir / "scenario.json", dump_report(report));
  return report;
}

json cmd_validate(const AnalysisConfig& config, const fs::path& a_path, const fs::path& b_path,
                  const fs::path& out_dir) {
  const auto schema = config.schema ? std::optional<TraceSchema>(read_schema(*config.schema)) : std::nullopt;
  const auto a = load_trace(a_path, schema).trace;
  const auto b = load_trace(b_path, schema).trace;
  std::vector<ChannelPair> pairs = config.validation.pairs;
  if (pairs.empty()) {
    for (const auto& c : a.channels()) {
      if (b.has_channel(c.name)) pairs.push_back({c.name, c.name});
    }
  }
  if (pairs.empty()) throw ConfigError("no channel pairs to compare");
  const auto corr = compare_traces(a, b, pairs, config.validation.max_lag, config.validation.window);
  json report = {{"command", "validate"},
                 {"a", a_path.generic_string()},
                 {"b", b_path.generic_string()},
                 {"correlation", correlation_json(corr)},
                 {"config", report_config(config)}};
  write_text_file(out_dir / "correlation.json", dump_report(report));
  write_text_file(out_dir / "overlay.svg", overlay_svg("trace comparison", a, pairs.front().a, b, pairs.front().b));
  return report;
}

}  // namespace immersia
