#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace immersia {

enum class ChannelKind { Position, Angle, Acceleration, Force, Dimensionless };

// Wire names used in schema files: position_m, angle_rad, ...
std::string_view to_string(ChannelKind kind);
ChannelKind channel_kind_from_string(std::string_view name);
// SI unit symbol carried by a kind ("m", "rad", "m/s^2", "N", "1").
std::string_view unit_of(ChannelKind kind);

struct Channel {
  std::string name;
  ChannelKind kind = ChannelKind::Dimensionless;
  std::vector<double> values;
};

// Uniformly sampled multi-channel time series. Immutable once built; the
// constructor enforces the shared-length / unique-name / finite-value rules.
class MotionTrace {
 public:
  MotionTrace(double sample_rate, std::vector<Channel> channels, double start_time = 0.0);

  double sample_rate() const noexcept { return sample_rate_; }
  double start_time() const noexcept { return start_time_; }
  std::size_t length() const noexcept { return length_; }
  double duration() const noexcept {
    return static_cast<double>(length_ - 1) / sample_rate_;
  }
  double time_at(std::size_t i) const noexcept {
    return start_time_ + static_cast<double>(i) / sample_rate_;
  }

  const std::vector<Channel>& channels() const noexcept { return channels_; }
  bool has_channel(std::string_view name) const;
  // Throws ConfigError naming the channel when absent.
  const Channel& channel(std::string_view name) const;
  std::span<const double> values(std::string_view name) const { return channel(name).values; }

  // Copy of this trace with extra channels appended (same length required).
  MotionTrace with_channels(std::vector<Channel> extra) const;
  // Copy restricted to [first, first + count).
  MotionTrace slice(std::size_t first, std::size_t count) const;

 private:
  double sample_rate_;
  double start_time_;
  std::size_t length_ = 0;
  std::vector<Channel> channels_;
};

struct ColumnMapping {
  std::string name;
  ChannelKind kind = ChannelKind::Dimensionless;
  std::string unit;
};

// Column-to-channel mapping for CSV ingestion. An empty `columns` map means
// "take every non-time column as a dimensionless channel of the same name".
struct TraceSchema {
  std::string time_column = "t";
  std::optional<double> sample_rate;
  std::map<std::string, ColumnMapping> columns;
  // Free-form provenance label ("synthetic" for generated fixtures).
  std::string origin;
};

TraceSchema schema_from_json(const nlohmann::json& j);
nlohmann::json schema_to_json(const TraceSchema& schema);
TraceSchema read_schema(const std::filesystem::path& path);
// Schema describing `trace` exactly, suitable as a sidecar for write_trace.
TraceSchema schema_for(const MotionTrace& trace, std::string origin = {});

struct IngestReport {
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;
  std::vector<std::size_t> dropped_rows;  // 1-based data row numbers
  bool resampled = false;
};

struct LoadedTrace {
  MotionTrace trace;
  IngestReport report;
  TraceSchema schema;
};

// Parses CSV text. Rows with NaN/Inf/empty cells in any used column are
// dropped and reported; non-uniform time stamps are linearly resampled onto
// a uniform grid at the schema's rate (or the median spacing if unset).
LoadedTrace parse_trace_csv(std::string_view text, const TraceSchema& schema);

// Loads a CSV file. Without an explicit schema, a `<path>.schema.json`
// sidecar is used when present.
LoadedTrace load_trace(const std::filesystem::path& path,
                       const std::optional<TraceSchema>& schema = std::nullopt);

// Shortest round-trip decimal representation of every value.
std::string format_trace_csv(const MotionTrace& trace, std::string_view time_column = "t");
void write_trace(const std::filesystem::path& path, const MotionTrace& trace,
                 std::string_view origin = {});

std::filesystem::path sidecar_schema_path(const std::filesystem::path& csv_path);

// Linear interpolation onto a uniform grid at `rate` starting at the trace's
// start time. Samples that coincide with input samples are copied verbatim.
MotionTrace resample(const MotionTrace& trace, double rate);

std::string format_double(double v);

}  // namespace immersia
