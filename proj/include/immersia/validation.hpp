#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "immersia/trace.hpp"

namespace immersia {

// Average ranks (1-based); tied values share the mean of their rank span.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of the average-ranked inputs. Throws ArgumentError on
// length mismatch or fewer than 3 samples, UndefinedCorrelationError when
// either input has zero rank variance.
double spearman(std::span<const double> x, std::span<const double> y);

struct ChannelPair {
  std::string a;
  std::string b;
};

struct PairCorrelation {
  ChannelPair channels;
  std::optional<double> rho;  // empty when undefined at every lag
  int lag = 0;                // b is shifted: a[i] is paired with b[i + lag]
  std::size_t samples = 0;
};

struct CorrelationReport {
  std::vector<PairCorrelation> pairs;
  double sample_rate = 0.0;
  int max_lag = 0;
};

struct TimeWindow {
  double start = 0.0;
  double end = 0.0;
};

// Per-pair Spearman rho at the lag in [-max_lag, max_lag] that maximizes it.
// `b` is resampled to `a`'s rate and both are cropped to their common time
// support (and the optional window) before the search. Ties between lags go
// to the smallest |lag|.
CorrelationReport compare_traces(const MotionTrace& a, const MotionTrace& b, std::span<const ChannelPair> pairs,
                                 int max_lag, std::optional<TimeWindow> window = std::nullopt);

}  // namespace immersia
