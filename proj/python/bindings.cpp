#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "immersia/cueing.hpp"
#include "immersia/error.hpp"
#include "immersia/gyration.hpp"
#include "immersia/pipeline.hpp"
#include "immersia/platform.hpp"
#include "immersia/submetrics.hpp"
#include "immersia/synth.hpp"
#include "immersia/trace.hpp"
#include "immersia/validation.hpp"

namespace py = pybind11;
using namespace immersia;

namespace {

ChannelKind kind_arg(const std::string& name) { return channel_kind_from_string(name); }

MotionTrace make_trace(double sample_rate, const std::map<std::string, std::vector<double>>& channels,
                       const std::map<std::string, std::string>& kinds, double start_time) {
  std::vector<Channel> out;
  for (const auto& [name, values] : channels) {
    auto it = kinds.find(name);
    out.push_back({name, it == kinds.end() ? ChannelKind::Dimensionless : kind_arg(it->second), values});
  }
  return MotionTrace(sample_rate, std::move(out), start_time);
}

py::dict trace_dict(const MotionTrace& t) {
  py::dict d;
  for (const auto& c : t.channels()) d[py::str(c.name)] = c.values;
  return d;
}

std::vector<SubmetricSpec> specs_for(const std::string& preset) { return submetric_preset(preset); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Immersion index geometry, submetrics and 3-DoF platform simulation";

  static py::exception<Error> base(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<IngestionError>(m, "IngestionError", base.ptr());
  py::register_exception<InsufficientDataError>(m, "InsufficientDataError", base.ptr());
  py::register_exception<DegenerateGeometryError>(m, "DegenerateGeometryError", base.ptr());
  py::register_exception<UndefinedCorrelationError>(m, "UndefinedCorrelationError", base.ptr());
  py::register_exception<SimulationFault>(m, "SimulationFault", base.ptr());
  py::register_exception<GenerationError>(m, "GenerationError", base.ptr());

  // --- traces
  py::class_<MotionTrace>(m, "MotionTrace")
      .def(py::init(&make_trace), py::arg("sample_rate"), py::arg("channels"),
           py::arg("kinds") = std::map<std::string, std::string>{}, py::arg("start_time") = 0.0)
      .def_property_readonly("sample_rate", &MotionTrace::sample_rate)
      .def_property_readonly("start_time", &MotionTrace::start_time)
      .def_property_readonly("duration", &MotionTrace::duration)
      .def("__len__", &MotionTrace::length)
      .def_property_readonly("channel_names",
                             [](const MotionTrace& t) {
                               std::vector<std::string> names;
                               for (const auto& c : t.channels()) names.push_back(c.name);
                               return names;
                             })
      .def("values", [](const MotionTrace& t, const std::string& name) { return t.channel(name).values; })
      .def("kind", [](const MotionTrace& t, const std::string& name) {
        return std::string(to_string(t.channel(name).kind));
      })
      .def("to_dict", &trace_dict);

  m.def("load_trace", [](const std::filesystem::path& p) { return load_trace(p).trace; }, py::arg("path"));
  m.def("write_trace", [](const std::filesystem::path& p, const MotionTrace& t) { write_trace(p, t); },
        py::arg("path"), py::arg("trace"));
  m.def("resample", &resample, py::arg("trace"), py::arg("rate"));

  // --- submetrics
  m.def("quartiles", [](const std::vector<double>& v) {
    const auto q = quartiles(v);
    return py::make_tuple(q.q1, q.q3);
  }, py::arg("values"));
  m.def("min_enclosing_circle", [](const std::vector<std::pair<double, double>>& pts) {
    std::vector<Point2> p;
    for (const auto& [x, y] : pts) p.push_back({x, y});
    const auto c = min_enclosing_circle(p);
    return py::make_tuple(py::make_tuple(c.center.x, c.center.y), c.radius);
  }, py::arg("points"));
  m.def("evaluate_submetrics", [](const MotionTrace& t, const std::string& preset) {
    py::dict out;
    for (const auto& v : evaluate_submetrics(t, specs_for(preset))) out[py::str(v.name)] = v.value;
    return out;
  }, py::arg("trace"), py::arg("preset"));

  // --- gyration geometry
  py::class_<GyrationCircle>(m, "GyrationCircle")
      .def(py::init([](std::pair<double, double> c, double r, std::string label) {
             GyrationCircle g;
             g.center = {c.first, c.second};
             g.radius = r;
             g.label = std::move(label);
             return g;
           }),
           py::arg("center"), py::arg("radius"), py::arg("label") = "")
      .def_property_readonly("center", [](const GyrationCircle& g) { return py::make_tuple(g.center.x, g.center.y); })
      .def_readonly("radius", &GyrationCircle::radius)
      .def_readonly("label", &GyrationCircle::label)
      .def_readonly("moment", &GyrationCircle::moment)
      .def_readonly("area", &GyrationCircle::area)
      .def_readonly("degenerate", &GyrationCircle::degenerate);

  m.def("radar_vertices", [](std::vector<double> values) {
    std::vector<std::pair<double, double>> out;
    for (const auto& v : RadarPolygon(std::move(values)).vertices()) out.emplace_back(v.x, v.y);
    return out;
  }, py::arg("values"));
  m.def("gyration_circle", [](std::vector<double> values, std::string label) {
    return gyration_circle(RadarPolygon(std::move(values)), std::move(label));
  }, py::arg("values"), py::arg("label") = "");
  m.def("circle_intersection_area", [](std::pair<double, double> c1, double r1, std::pair<double, double> c2,
                                       double r2) {
    return circle_intersection_area({c1.first, c1.second}, r1, {c2.first, c2.second}, r2);
  });
  m.def("immersion_index", &immersion_index, py::arg("test"), py::arg("reference"));
  m.def("compare_circles", [](const GyrationCircle& test, const GyrationCircle& ref) {
    const auto r = compare_circles(test, ref);
    py::dict d;
    d["center_distance"] = r.center_distance;
    d["intersection_area"] = r.intersection_area;
    d["union_area"] = r.union_area;
    d["index_percent"] = r.index_percent;
    d["degenerate"] = r.degenerate;
    return d;
  }, py::arg("test"), py::arg("reference"));
  m.def("analyze", [](const MotionTrace& t, const std::string& preset, std::string label) {
    return analyze_condition(t, specs_for(preset), std::move(label)).circle;
  }, py::arg("trace"), py::arg("preset"), py::arg("label") = "");

  // --- validation
  m.def("spearman", [](const std::vector<double>& x, const std::vector<double>& y) { return spearman(x, y); },
        py::arg("x"), py::arg("y"));
  m.def("average_ranks", [](const std::vector<double>& x) { return average_ranks(x); }, py::arg("values"));

  // --- cueing and platform
  py::class_<PoseReference>(m, "PoseReference")
      .def(py::init<double, double, double>(), py::arg("roll") = 0.0, py::arg("pitch") = 0.0,
           py::arg("heave") = 0.0)
      .def_readwrite("roll", &PoseReference::roll)
      .def_readwrite("pitch", &PoseReference::pitch)
      .def_readwrite("heave", &PoseReference::heave)
      .def("__repr__", [](const PoseReference& p) {
        return "PoseReference(roll=" + std::to_string(p.roll) + ", pitch=" + std::to_string(p.pitch) +
               ", heave=" + std::to_string(p.heave) + ")";
      });
  py::class_<PoseLimits>(m, "PoseLimits")
      .def(py::init<>())
      .def_readwrite("roll_max", &PoseLimits::roll_max)
      .def_readwrite("pitch_max", &PoseLimits::pitch_max)
      .def_readwrite("heave_max", &PoseLimits::heave_max);
  py::class_<PlatformConfig>(m, "PlatformConfig")
      .def(py::init<>())
      .def_readwrite("attachment_radius", &PlatformConfig::attachment_radius)
      .def_readwrite("actuator_bandwidth", &PlatformConfig::actuator_bandwidth)
      .def_readwrite("max_leg_velocity", &PlatformConfig::max_leg_velocity)
      .def_readwrite("sim_rate", &PlatformConfig::sim_rate)
      .def_readwrite("limits", &PlatformConfig::limits)
      .def_readwrite("imu_noise_sigma", &PlatformConfig::imu_noise_sigma)
      .def_readwrite("seed", &PlatformConfig::seed);

  m.def("tilt_coordination", [](double a_long, double a_lat, double a_vert, double g, const PoseLimits& limits) {
    return tilt_coordination({a_long, a_lat, a_vert}, g, limits);
  }, py::arg("a_long"), py::arg("a_lat"), py::arg("a_vert") = 0.0, py::arg("g") = kGravity,
        py::arg("limits") = PoseLimits{});
  m.def("boat_passthrough", &boat_passthrough, py::arg("roll"), py::arg("pitch"), py::arg("heave"),
        py::arg("limits") = PoseLimits{});
  m.def("inverse_kinematics", [](const PoseReference& p, const PlatformConfig& c) {
    const auto l = inverse_kinematics(p, c);
    return std::vector<double>(l.begin(), l.end());
  }, py::arg("pose"), py::arg("config") = PlatformConfig{});
  m.def("forward_kinematics", [](const std::vector<double>& legs, const PlatformConfig& c) {
    if (legs.size() != 3) throw ArgumentError("three leg displacements expected");
    return forward_kinematics({legs[0], legs[1], legs[2]}, c);
  }, py::arg("legs"), py::arg("config") = PlatformConfig{});
  m.def("simulate", [](const MotionTrace& ref, const PlatformConfig& cfg, const std::string& mode) {
    auto r = simulate(ref, cfg, cueing_mode_from_string(mode));
    py::dict d;
    d["trace"] = r.trace;
    d["max_leg_speed"] = r.max_leg_speed;
    d["steps"] = r.steps;
    return d;
  }, py::arg("reference"), py::arg("config") = PlatformConfig{}, py::arg("mode") = "boat_pose");

  // --- synthetic scenarios
  m.def("generate_scenario", [](const std::string& activity, double duration, std::uint64_t seed,
                                double ground_truth, double platform, double no_feedback) {
    ScenarioSpec spec;
    spec.activity = activity_from_string(activity);
    spec.duration = duration;
    spec.seed = seed;
    spec.ground_truth.scale = ground_truth;
    spec.platform.scale = platform;
    spec.no_feedback.scale = no_feedback;
    auto s = generate_scenario(spec);
    py::dict d;
    d["ground_truth"] = std::move(s.ground_truth);
    d["platform"] = std::move(s.platform);
    d["no_feedback"] = std::move(s.no_feedback);
    d["reference"] = std::move(s.reference);
    return d;
  }, py::arg("activity") = "ski", py::arg("duration") = 60.0, py::arg("seed") = 42, py::arg("ground_truth") = 1.0,
        py::arg("platform") = 0.8, py::arg("no_feedback") = 0.4);
}
