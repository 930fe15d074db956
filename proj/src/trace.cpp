#include "immersia/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "immersia/error.hpp"

namespace immersia {

namespace {

constexpr double kUniformTolerance = 1e-6;  // relative spread of time steps

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

std::optional<double> parse_cell(std::string_view cell) {
  if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  // from_chars rejects a leading '+', which some writers emit.
  if (cell.front() == '+') cell.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec == std::errc::result_out_of_range) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return v;
}

double interpolate(std::span<const double> v, double u) {
  const auto last = v.size() - 1;
  if (u <= 0.0) return v.front();
  if (u >= static_cast<double>(last)) return v.back();
  const auto i = static_cast<std::size_t>(std::floor(u));
  const double frac = u - static_cast<double>(i);
  return v[i] + frac * (v[i + 1] - v[i]);
}

}  // namespace

std::string_view to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::Position: return "position_m";
    case ChannelKind::Angle: return "angle_rad";
    case ChannelKind::Acceleration: return "acceleration_ms2";
    case ChannelKind::Force: return "force_N";
    case ChannelKind::Dimensionless: return "dimensionless";
  }
  return "dimensionless";
}

ChannelKind channel_kind_from_string(std::string_view name) {
  if (name == "position_m") return ChannelKind::Position;
  if (name == "angle_rad") return ChannelKind::Angle;
  if (name == "acceleration_ms2") return ChannelKind::Acceleration;
  if (name == "force_N") return ChannelKind::Force;
  if (name == "dimensionless") return ChannelKind::Dimensionless;
  throw ConfigError("unknown channel kind '" + std::string(name) + "'");
}

std::string_view unit_of(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::Position: return "m";
    case ChannelKind::Angle: return "rad";
    case ChannelKind::Acceleration: return "m/s^2";
    case ChannelKind::Force: return "N";
    case ChannelKind::Dimensionless: return "1";
  }
  return "1";
}

// ---------------------------------------------------------------------------
// MotionTrace

MotionTrace::MotionTrace(double sample_rate, std::vector<Channel> channels, double start_time)
    : sample_rate_(sample_rate), start_time_(start_time), channels_(std::move(channels)) {
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_)) {
    throw ArgumentError("sample rate must be positive and finite");
  }
  if (!std::isfinite(start_time_)) throw ArgumentError("start time must be finite");
  if (channels_.empty()) throw ArgumentError("a trace needs at least one channel");
  length_ = channels_.front().values.size();
  std::set<std::string_view> names;
  for (const auto& ch : channels_) {
    if (ch.name.empty()) throw ArgumentError("channel names must be non-empty");
    if (!names.insert(ch.name).second) {
      throw ArgumentError("duplicate channel name '" + ch.name + "'");
    }
    if (ch.values.size() != length_) {
      throw ArgumentError("channel '" + ch.name + "' length differs from the trace length");
    }
    if (!std::all_of(ch.values.begin(), ch.values.end(), [](double v) { return std::isfinite(v); })) {
      throw ArgumentError("channel '" + ch.name + "' contains non-finite values");
    }
  }
  if (length_ < 2) throw ArgumentError("a trace needs at least 2 samples");
}

bool MotionTrace::has_channel(std::string_view name) const {
  return std::any_of(channels_.begin(), channels_.end(),
                     [&](const Channel& c) { return c.name == name; });
}

const Channel& MotionTrace::channel(std::string_view name) const {
  for (const auto& c : channels_) {
    if (c.name == name) return c;
  }
  throw ConfigError("missing channel '" + std::string(name) + "'");
}

MotionTrace MotionTrace::with_channels(std::vector<Channel> extra) const {
  auto all = channels_;
  for (auto& c : extra) all.push_back(std::move(c));
  return MotionTrace(sample_rate_, std::move(all), start_time_);
}

MotionTrace MotionTrace::slice(std::size_t first, std::size_t count) const {
  if (first + count > length_ || count < 2) throw ArgumentError("slice outside the trace");
  std::vector<Channel> out;
  out.reserve(channels_.size());
  for (const auto& c : channels_) {
    out.push_back({c.name, c.kind,
                   std::vector<double>(c.values.begin() + static_cast<std::ptrdiff_t>(first),
                                       c.values.begin() + static_cast<std::ptrdiff_t>(first + count))});
  }
  return MotionTrace(sample_rate_, std::move(out), time_at(first));
}

// ---------------------------------------------------------------------------
// Schema

TraceSchema schema_from_json(const nlohmann::json& j) {
  TraceSchema s;
  if (!j.is_object()) throw ConfigError("schema must be a JSON object");
  try {
    s.time_column = j.value("time_column", std::string("t"));
    if (j.contains("sample_rate") && !j.at("sample_rate").is_null()) {
      s.sample_rate = j.at("sample_rate").get<double>();
      if (!(*s.sample_rate > 0.0)) throw ConfigError("schema sample_rate must be positive");
    }
    s.origin = j.value("origin", std::string());
    if (j.contains("columns")) {
      for (const auto& [column, m] : j.at("columns").items()) {
        ColumnMapping cm;
        cm.name = m.value("name", column);
        cm.kind = channel_kind_from_string(m.value("kind", std::string("dimensionless")));
        cm.unit = m.value("unit", std::string(unit_of(cm.kind)));
        s.columns.emplace(column, std::move(cm));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed schema: ") + e.what());
  }
  return s;
}

nlohmann::json schema_to_json(const TraceSchema& schema) {
  nlohmann::json j;
  j["time_column"] = schema.time_column;
  if (schema.sample_rate) j["sample_rate"] = *schema.sample_rate;
  if (!schema.origin.empty()) j["origin"] = schema.origin;
  nlohmann::json cols = nlohmann::json::object();
  for (const auto& [column, m] : schema.columns) {
    cols[column] = {{"name", m.name}, {"kind", std::string(to_string(m.kind))}, {"unit", m.unit}};
  }
  j["columns"] = std::move(cols);
  return j;
}

TraceSchema read_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open schema file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("schema " + path.string() + ": " + e.what());
  }
  return schema_from_json(j);
}

TraceSchema schema_for(const MotionTrace& trace, std::string origin) {
  TraceSchema s;
  s.sample_rate = trace.sample_rate();
  s.origin = std::move(origin);
  for (const auto& c : trace.channels()) {
    s.columns.emplace(c.name, ColumnMapping{c.name, c.kind, std::string(unit_of(c.kind))});
  }
  return s;
}

// ---------------------------------------------------------------------------
// CSV ingestion

LoadedTrace parse_trace_csv(std::string_view text, const TraceSchema& schema) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      auto pos = text.find('\n', start);
      auto line = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
      if (!trim(line).empty()) lines.push_back(line);
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
  }
  if (lines.empty()) throw IngestionError("empty CSV input");

  const auto header = split_fields(lines.front());
  auto column_index = [&](std::string_view name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("missing column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
  };

  const std::size_t time_idx = column_index(schema.time_column);
  struct Used {
    std::size_t index;
    ColumnMapping mapping;
  };
  std::vector<Used> used;
  if (schema.columns.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i == time_idx) continue;
      used.push_back({i, {std::string(header[i]), ChannelKind::Dimensionless, "1"}});
    }
  } else {
    // Keep file column order so a written trace reads back in the same layout.
    for (std::size_t i = 0; i < header.size(); ++i) {
      auto it = schema.columns.find(std::string(header[i]));
      if (it != schema.columns.end()) used.push_back({i, it->second});
    }
    for (const auto& [column, m] : schema.columns) column_index(column);
  }
  if (used.empty()) throw ConfigError("no data columns mapped");

  IngestReport report;
  std::vector<double> times;
  std::vector<std::vector<double>> cols(used.size());
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_fields(lines[r]);
    if (fields.size() != header.size()) {
      throw IngestionError("row " + std::to_string(r) + " has " + std::to_string(fields.size()) +
                           " fields, expected " + std::to_string(header.size()));
    }
    ++report.rows_read;
    auto parse_or_throw = [&](std::size_t idx) {
      auto v = parse_cell(fields[idx]);
      if (!v) {
        throw IngestionError("row " + std::to_string(r) + ", column '" + std::string(header[idx]) +
                             "': not a number");
      }
      return *v;
    };
    const double t = parse_or_throw(time_idx);
    std::vector<double> row(used.size());
    bool ok = std::isfinite(t);
    for (std::size_t c = 0; c < used.size(); ++c) {
      row[c] = parse_or_throw(used[c].index);
      ok = ok && std::isfinite(row[c]);
    }
    if (!ok) {
      ++report.rows_dropped;
      report.dropped_rows.push_back(r);
      continue;
    }
    times.push_back(t);
    for (std::size_t c = 0; c < used.size(); ++c) cols[c].push_back(row[c]);
  }

  if (times.size() < 2) throw IngestionError("fewer than 2 valid rows");
  std::vector<double> steps(times.size() - 1);
  for (std::size_t i = 1; i < times.size(); ++i) {
    steps[i - 1] = times[i] - times[i - 1];
    if (!(steps[i - 1] > 0.0)) {
      throw IngestionError("time column is not strictly increasing at row " + std::to_string(i + 1));
    }
  }
  const double span = times.back() - times.front();
  const double mean_step = span / static_cast<double>(steps.size());
  const bool uniform = std::all_of(steps.begin(), steps.end(), [&](double s) {
    return std::abs(s - mean_step) <= kUniformTolerance * mean_step;
  });

  double rate = 0.0;
  if (schema.sample_rate) {
    rate = *schema.sample_rate;
  } else {
    auto sorted = steps;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    rate = 1.0 / (uniform ? mean_step : sorted[sorted.size() / 2]);
  }

  std::vector<Channel> channels;
  channels.reserve(used.size());
  if (uniform && std::abs(rate * mean_step - 1.0) <= kUniformTolerance) {
    for (std::size_t c = 0; c < used.size(); ++c) {
      channels.push_back({used[c].mapping.name, used[c].mapping.kind, std::move(cols[c])});
    }
  } else {
    report.resampled = true;
    const auto count = static_cast<std::size_t>(std::floor(span * rate + 1e-9)) + 1;
    if (count < 2) throw IngestionError("time span too short for the requested sample rate");
    const double hit = 1e-9 / rate;
    for (std::size_t c = 0; c < used.size(); ++c) {
      std::vector<double> out(count);
      std::size_t j = 0;
      for (std::size_t k = 0; k < count; ++k) {
        const double t = times.front() + static_cast<double>(k) / rate;
        while (j + 2 < times.size() && times[j + 1] <= t) ++j;
        if (std::abs(t - times[j]) <= hit) {
          out[k] = cols[c][j];
        } else if (std::abs(t - times[j + 1]) <= hit) {
          out[k] = cols[c][j + 1];
        } else {
          const double frac = std::clamp((t - times[j]) / (times[j + 1] - times[j]), 0.0, 1.0);
          out[k] = cols[c][j] + frac * (cols[c][j + 1] - cols[c][j]);
        }
      }
      channels.push_back({used[c].mapping.name, used[c].mapping.kind, std::move(out)});
    }
  }

  TraceSchema effective = schema;
  effective.sample_rate = rate;
  return {MotionTrace(rate, std::move(channels), times.front()), std::move(report), std::move(effective)};
}

std::filesystem::path sidecar_schema_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p += ".schema.json";
  return p;
}

LoadedTrace load_trace(const std::filesystem::path& path, const std::optional<TraceSchema>& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open trace file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  TraceSchema effective;
  if (schema) {
    effective = *schema;
  } else if (auto side = sidecar_schema_path(path); std::filesystem::exists(side)) {
    effective = read_schema(side);
  }
  return parse_trace_csv(buf.str(), effective);
}

// ---------------------------------------------------------------------------
// CSV output

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_trace_csv(const MotionTrace& trace, std::string_view time_column) {
  std::string out;
  out += time_column;
  for (const auto& c : trace.channels()) {
    out += ',';
    out += c.name;
  }
  out += '\n';
  for (std::size_t i = 0; i < trace.length(); ++i) {
    out += format_double(trace.time_at(i));
    for (const auto& c : trace.channels()) {
      out += ',';
      out += format_double(c.values[i]);
    }
    out += '\n';
  }
  return out;
}

void write_trace(const std::filesystem::path& path, const MotionTrace& trace, std::string_view origin) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestionError("cannot write trace file " + path.string());
    out << format_trace_csv(trace);
  }
  std::ofstream side(sidecar_schema_path(path), std::ios::binary);
  side << schema_to_json(schema_for(trace, std::string(origin))).dump(2) << '\n';
}

// ---------------------------------------------------------------------------

MotionTrace resample(const MotionTrace& trace, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw ArgumentError("resample rate must be positive");
  const auto count = static_cast<std::size_t>(std::floor(trace.duration() * rate + 1e-9)) + 1;
  if (count < 2) throw ArgumentError("resample rate too low for the trace duration");
  const double ratio = trace.sample_rate() / rate;
  std::vector<Channel> out;
  out.reserve(trace.channels().size());
  for (const auto& c : trace.channels()) {
    std::vector<double> v(count);
    for (std::size_t k = 0; k < count; ++k) {
      const double u = static_cast<double>(k) * ratio;
      const double nearest = std::round(u);
      if (std::abs(u - nearest) <= 1e-9 && nearest < static_cast<double>(c.values.size())) {
        v[k] = c.values[static_cast<std::size_t>(nearest)];
      } else {
        v[k] = interpolate(c.values, u);
      }
    }
    out.push_back({c.name, c.kind, std::move(v)});
  }
  return MotionTrace(rate, std::move(out), trace.start_time());
}

}  // namespace immersia
