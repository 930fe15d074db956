#include "immersia/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "immersia/error.hpp"

namespace immersia {

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ArgumentError("spearman inputs differ in length");
  if (x.size() < 3) throw ArgumentError("spearman needs at least 3 samples");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  // Average ranks always have mean (n + 1) / 2.
  const double mean = 0.5 * static_cast<double>(x.size() + 1);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelationError("zero rank variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationReport compare_traces(const MotionTrace& a, const MotionTrace& b, std::span<const ChannelPair> pairs,
                                 int max_lag, std::optional<TimeWindow> window) {
  if (max_lag < 0) throw ArgumentError("max_lag must be nonnegative");
  const MotionTrace bb = std::abs(b.sample_rate() - a.sample_rate()) <= 1e-12 * a.sample_rate()
                             ? b
                             : resample(b, a.sample_rate());
  const double rate = a.sample_rate();

  double t0 = std::max(a.start_time(), bb.start_time());
  double t1 = std::min(a.time_at(a.length() - 1), bb.time_at(bb.length() - 1));
  if (window) {
    t0 = std::max(t0, window->start);
    t1 = std::min(t1, window->end);
  }
  if (!(t1 > t0)) throw ArgumentError("traces have no overlapping support");
  auto first_index = [&](const MotionTrace& tr) {
    return static_cast<std::size_t>(std::max(0.0, std::ceil((t0 - tr.start_time()) * rate - 1e-9)));
  };
  const std::size_t ia = first_index(a);
  const std::size_t ib = first_index(bb);
  const auto n = std::min({static_cast<std::size_t>(std::floor((t1 - t0) * rate + 1e-9)) + 1, a.length() - ia,
                           bb.length() - ib});
  if (n < 3) throw ArgumentError("overlap too short for correlation");

  CorrelationReport report;
  report.sample_rate = rate;
  report.max_lag = max_lag;
  for (const auto& pair : pairs) {
    const auto va = a.values(pair.a).subspan(ia, n);
    const auto vb = bb.values(pair.b).subspan(ib, n);
    PairCorrelation pc{pair, std::nullopt, 0, 0};
    // Lags in order 0, -1, +1, -2, +2, ... so ties keep the smallest |lag|.
    for (int step = 0; step <= 2 * max_lag; ++step) {
      const int lag = (step % 2 == 1) ? -(step + 1) / 2 : step / 2;
      const std::size_t shift = static_cast<std::size_t>(std::abs(lag));
      if (shift + 3 > n) continue;
      const std::size_t len = n - shift;
      const auto xa = lag >= 0 ? va.subspan(0, len) : va.subspan(shift, len);
      const auto xb = lag >= 0 ? vb.subspan(shift, len) : vb.subspan(0, len);
      double rho = 0.0;
      try {
        rho = spearman(xa, xb);
      } catch (const UndefinedCorrelationError&) {
        continue;
      }
      if (!pc.rho || rho > *pc.rho) {
        pc.rho = rho;
        pc.lag = lag;
        pc.samples = len;
      }
    }
    report.pairs.push_back(std::move(pc));
  }
  return report;
}

}  // namespace immersia
