#pragma once

#include <cstdint>

#include "welrci/npmle.hpp"

namespace welrci {

struct PercentileCI {
  double lo = 0.0;
  double hi = 0.0;
  bool smoothed = false;
  int B = 0;
  int degenerate = 0;
};

// bootstrap percentile interval for the raw (step inverse) or smoothed quantile
PercentileCI bootstrap_percentile_ci(const CensoredSample& sample, double q, double alpha, int B,
                                     std::uint64_t seed, bool smoothed, double em_tol = 1e-3,
                                     int em_max_iter = 10000);

}  // namespace welrci
