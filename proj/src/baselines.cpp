#include "welrci/baselines.hpp"

#include <stdexcept>

#include "welrci/mathutil.hpp"
#include "welrci/smoothing.hpp"

namespace welrci {

PercentileCI bootstrap_percentile_ci(const CensoredSample& sample, double q, double alpha, int B,
                                     std::uint64_t seed, bool smoothed, double em_tol,
                                     int em_max_iter) {
  if (B < 2) throw std::invalid_argument("bootstrap_percentile_ci: B must be at least 2");
  int n = sample.n();
  PercentileCI ci;
  ci.smoothed = smoothed;
  ci.B = B;
  std::vector<double> stats;
  stats.reserve(static_cast<std::size_t>(B));
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int rep = 0; rep < B; ++rep) {
    Rng rng(substream(seed, {static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(n)}));
    for (auto& i : idx) i = static_cast<int>(rng.bounded(static_cast<std::uint32_t>(n)));
    DiscreteDistribution dist;
    try {
      dist = fit_npmle(resample(sample, idx), em_tol, em_max_iter).first;
    } catch (const std::exception&) {
      ++ci.degenerate;
      continue;
    }
    stats.push_back(smoothed ? smoothed_quantile(dist, q) : raw_quantile(dist, q));
  }
  if (stats.empty()) throw std::runtime_error("bootstrap_percentile_ci: all replicates degenerate");
  ci.lo = upper_order_statistic(stats, 0.5 * alpha);
  ci.hi = upper_order_statistic(stats, 1.0 - 0.5 * alpha);
  return ci;
}

}  // namespace welrci
