#include "immersia/config.hpp"

#include <fstream>

#include "immersia/error.hpp"

namespace immersia {

using nlohmann::json;

namespace {

PidGains parse_gains(const json& j, PidGains d) {
  return {j.value("kp", d.kp), j.value("ki", d.ki), j.value("kd", d.kd)};
}

json gains_json(const PidGains& g) { return {{"kp", g.kp}, {"ki", g.ki}, {"kd", g.kd}}; }

ConditionProfile parse_profile(const json& j, ConditionProfile d) {
  if (j.is_number()) return {j.get<double>(), {}};
  ConditionProfile p;
  p.scale = j.value("scale", d.scale);
  if (j.contains("channels")) p.channel_scale = j.at("channels").get<std::map<std::string, double>>();
  return p;
}

json profile_json(const ConditionProfile& p) {
  json j = {{"scale", p.scale}};
  if (!p.channel_scale.empty()) j["channels"] = p.channel_scale;
  return j;
}

std::vector<std::string> pair_of(const json& j, const char* key) {
  auto v = j.value(key, std::vector<std::string>{});
  if (v.size() != 2) throw ConfigError(std::string("derive step field '") + key + "' needs two marker names");
  return v;
}

}  // namespace

void AnalysisConfig::apply_preset(const std::string& name) {
  submetrics = submetric_preset(name);
  preset = name;
  scenario.activity = activity_from_string(name);
  mode = cueing_mode_for(scenario.activity);
}

void AnalysisConfig::validate() const {
  if (!submetrics.empty()) validate_spec_set(submetrics);
  smoothing.validate();
  platform.validate();
  scenario.validate();
  if (validation.max_lag < 0) throw ConfigError("validation.max_lag must be nonnegative");
  if (validation.window && !(validation.window->end > validation.window->start)) {
    throw ConfigError("validation.window must have end > start");
  }
}

AnalysisConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  AnalysisConfig c;
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    if (j.contains("preset")) c.apply_preset(j.at("preset").get<std::string>());
    if (j.contains("schema")) {
      std::filesystem::path p = j.at("schema").get<std::string>();
      c.schema = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
      if (!std::filesystem::exists(*c.schema)) throw ConfigError("schema file not found: " + c.schema->string());
    }
    if (j.contains("submetrics")) {
      c.submetrics.clear();
      int next_axis = 0;
      for (const auto& s : j.at("submetrics")) {
        SubmetricSpec spec;
        spec.name = s.at("name").get<std::string>();
        spec.sources = s.at("sources").get<std::vector<std::string>>();
        spec.dimensionality = s.value("dimensionality", static_cast<int>(spec.sources.size()));
        spec.axis_index = s.value("axis_index", next_axis);
        ++next_axis;
        c.submetrics.push_back(std::move(spec));
      }
    }
    if (j.contains("derive")) {
      for (const auto& d : j.at("derive")) {
        DeriveStep step;
        step.op = d.at("op").get<std::string>();
        step.name = d.value("name", std::string(step.op == "cog" ? "cog" : ""));
        if (step.op == "joint_angle") {
          step.markers = d.at("markers").get<std::vector<std::string>>();
          if (step.markers.size() != 3) throw ConfigError("joint_angle needs three markers");
        } else if (step.op == "vector_angle") {
          step.u = pair_of(d, "u");
          step.v = pair_of(d, "v");
        } else if (step.op == "cog") {
          if (d.contains("weights")) step.weights = d.at("weights").get<std::map<std::string, double>>();
        } else if (step.op == "differentiate") {
          step.source = d.at("source").get<std::string>();
          step.order = d.value("order", 2);
        } else {
          throw ConfigError("unknown derive op '" + step.op + "'");
        }
        if (step.name.empty()) throw ConfigError("derive step '" + step.op + "' needs a name");
        c.derive.push_back(std::move(step));
      }
    }
    if (j.contains("smoothing")) {
      const auto& s = j.at("smoothing");
      c.smoothing.method = smoothing_method_from_string(s.value("method", std::string("savitzky_golay")));
      c.smoothing.window = s.value("window", c.smoothing.window);
      c.smoothing.polyorder = s.value("polyorder", c.smoothing.polyorder);
    }
    if (j.contains("cog_weights")) c.cog_weights = j.at("cog_weights").get<std::map<std::string, double>>();
    if (j.contains("cueing")) {
      const auto& q = j.at("cueing");
      if (q.contains("mode")) c.mode = cueing_mode_from_string(q.at("mode").get<std::string>());
      if (q.contains("limits")) {
        const auto& l = q.at("limits");
        auto& lim = c.platform.limits;
        lim.roll_max = deg_to_rad(l.value("roll_max_deg", rad_to_deg(lim.roll_max)));
        lim.pitch_max = deg_to_rad(l.value("pitch_max_deg", rad_to_deg(lim.pitch_max)));
        lim.heave_max = l.value("heave_max_m", lim.heave_max);
      }
      c.platform.washout_cutoff = q.value("washout_cutoff_hz", c.platform.washout_cutoff);
    }
    if (j.contains("platform")) {
      const auto& p = j.at("platform");
      auto& pc = c.platform;
      pc.attachment_radius = p.value("attachment_radius_m", pc.attachment_radius);
      if (p.contains("leg_angles_deg")) {
        const auto a = p.at("leg_angles_deg").get<std::vector<double>>();
        if (a.size() != 3) throw ConfigError("leg_angles_deg needs three values");
        for (int i = 0; i < 3; ++i) pc.leg_angles[i] = deg_to_rad(a[i]);
      }
      pc.actuator_bandwidth = p.value("actuator_bandwidth_hz", pc.actuator_bandwidth);
      pc.max_leg_velocity = p.value("max_leg_velocity_ms", pc.max_leg_velocity);
      if (p.contains("pid_outer")) pc.pid_outer = parse_gains(p.at("pid_outer"), pc.pid_outer);
      if (p.contains("pid_inner")) pc.pid_inner = parse_gains(p.at("pid_inner"), pc.pid_inner);
      pc.sim_rate = p.value("sim_rate_hz", pc.sim_rate);
      pc.gravity = p.value("gravity", pc.gravity);
      pc.imu_noise_sigma = p.value("imu_noise_sigma", pc.imu_noise_sigma);
      pc.seed = p.value("seed", pc.seed);
      pc.torque_capacity = p.value("torque_capacity_nm", pc.torque_capacity);
    }
    if (j.contains("scenario")) {
      const auto& s = j.at("scenario");
      auto& sc = c.scenario;
      if (s.contains("activity")) sc.activity = activity_from_string(s.at("activity").get<std::string>());
      sc.duration = s.value("duration_s", sc.duration);
      sc.sample_rate = s.value("sample_rate_hz", sc.sample_rate);
      sc.seed = s.value("seed", sc.seed);
      if (s.contains("ground_truth")) sc.ground_truth = parse_profile(s.at("ground_truth"), sc.ground_truth);
      if (s.contains("platform")) sc.platform = parse_profile(s.at("platform"), sc.platform);
      if (s.contains("no_feedback")) sc.no_feedback = parse_profile(s.at("no_feedback"), sc.no_feedback);
    }
    if (j.contains("validation")) {
      const auto& v = j.at("validation");
      c.validation.max_lag = v.value("max_lag", c.validation.max_lag);
      if (v.contains("pairs")) {
        for (const auto& p : v.at("pairs")) {
          const auto names = p.get<std::vector<std::string>>();
          if (names.size() != 2) throw ConfigError("validation pairs need two channel names");
          c.validation.pairs.push_back({names[0], names[1]});
        }
      }
      if (v.contains("window")) {
        const auto w = v.at("window").get<std::vector<double>>();
        if (w.size() != 2) throw ConfigError("validation.window needs [start, end]");
        c.validation.window = TimeWindow{w[0], w[1]};
      }
    }
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

AnalysisConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

json config_to_json(const AnalysisConfig& c) {
  json j;
  j["preset"] = c.preset;
  j["schema"] = c.schema ? json(c.schema->generic_string()) : json(nullptr);
  json subs = json::array();
  for (const auto& s : c.submetrics) {
    subs.push_back({{"name", s.name}, {"dimensionality", s.dimensionality}, {"sources", s.sources},
                    {"axis_index", s.axis_index}});
  }
  j["submetrics"] = std::move(subs);
  json derive = json::array();
  for (const auto& d : c.derive) {
    json e = {{"op", d.op}, {"name", d.name}};
    if (!d.markers.empty()) e["markers"] = d.markers;
    if (!d.u.empty()) e["u"] = d.u;
    if (!d.v.empty()) e["v"] = d.v;
    if (!d.source.empty()) {
      e["source"] = d.source;
      e["order"] = d.order;
    }
    if (!d.weights.empty()) e["weights"] = d.weights;
    derive.push_back(std::move(e));
  }
  j["derive"] = std::move(derive);
  j["smoothing"] = {{"method", std::string(to_string(c.smoothing.method))},
                    {"window", c.smoothing.window},
                    {"polyorder", c.smoothing.polyorder}};
  j["cog_weights"] = c.cog_weights;
  const auto& lim = c.platform.limits;
  j["cueing"] = {{"mode", c.mode ? json(std::string(to_string(*c.mode))) : json(nullptr)},
                 {"limits",
                  {{"roll_max_deg", rad_to_deg(lim.roll_max)},
                   {"pitch_max_deg", rad_to_deg(lim.pitch_max)},
                   {"heave_max_m", lim.heave_max}}},
                 {"washout_cutoff_hz", c.platform.washout_cutoff}};
  const auto& p = c.platform;
  j["platform"] = {{"attachment_radius_m", p.attachment_radius},
                   {"leg_angles_deg",
                    {rad_to_deg(p.leg_angles[0]), rad_to_deg(p.leg_angles[1]), rad_to_deg(p.leg_angles[2])}},
                   {"actuator_bandwidth_hz", p.actuator_bandwidth},
                   {"max_leg_velocity_ms", p.max_leg_velocity},
                   {"pid_outer", gains_json(p.pid_outer)},
                   {"pid_inner", gains_json(p.pid_inner)},
                   {"sim_rate_hz", p.sim_rate},
                   {"gravity", p.gravity},
                   {"imu_noise_sigma", p.imu_noise_sigma},
                   {"seed", p.seed},
                   {"torque_capacity_nm", p.torque_capacity}};
  const auto& s = c.scenario;
  j["scenario"] = {{"activity", std::string(to_string(s.activity))},
                   {"duration_s", s.duration},
                   {"sample_rate_hz", s.sample_rate},
                   {"seed", s.seed},
                   {"ground_truth", profile_json(s.ground_truth)},
                   {"platform", profile_json(s.platform)},
                   {"no_feedback", profile_json(s.no_feedback)}};
  json pairs = json::array();
  for (const auto& pr : c.validation.pairs) pairs.push_back({pr.a, pr.b});
  j["validation"] = {{"max_lag", c.validation.max_lag}, {"pairs", std::move(pairs)}};
  if (c.validation.window) j["validation"]["window"] = {c.validation.window->start, c.validation.window->end};
  j["output_dir"] = c.output_dir.generic_string();
  return j;
}

MotionTrace apply_derivations(const MotionTrace& trace, const AnalysisConfig& config) {
  MotionTrace out = trace;
  const double dt = 1.0 / trace.sample_rate();
  for (const auto& step : config.derive) {
    std::vector<Channel> added;
    if (step.op == "joint_angle") {
      const auto& m = step.markers;
      added.push_back({step.name, ChannelKind::Angle,
                       joint_angle(marker_series(out, m[0]), marker_series(out, m[1]), marker_series(out, m[2]))});
    } else if (step.op == "vector_angle") {
      auto vectors = [&](const std::vector<std::string>& ends) {
        const auto from = marker_series(out, ends[0]);
        const auto to = marker_series(out, ends[1]);
        Vec3Series d(from.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = to[i] - from[i];
        return d;
      };
      added.push_back({step.name, ChannelKind::Angle, vector_angle(vectors(step.u), vectors(step.v))});
    } else if (step.op == "cog") {
      if (out.has_channel(step.name + "_x") && out.has_channel(step.name + "_y") &&
          out.has_channel(step.name + "_z")) {
        continue;
      }
      const auto& weights = step.weights.empty() ? config.cog_weights : step.weights;
      std::vector<std::string> names;
      for (const auto& [n, w] : weights) names.push_back(n);
      const auto cog = cog_estimate(MarkerSet::from_trace(out, names), weights);
      for (int axis = 0; axis < 3; ++axis) {
        std::vector<double> v(cog.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = cog[i](axis);
        added.push_back({step.name + "_" + "xyz"[axis], ChannelKind::Position, std::move(v)});
      }
    } else if (step.op == "differentiate") {
      added.push_back(differentiate(out.channel(step.source), dt, config.smoothing, step.order, step.name));
    }
    out = out.with_channels(std::move(added));
  }
  return out;
}

}  // namespace immersia
