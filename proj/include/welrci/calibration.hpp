#pragma once

#include <cstdint>
#include <vector>

#include "welrci/interval.hpp"

namespace welrci {

struct RateSpec {
  double exponent = 0.5;

  double value(int n) const;
};

RateSpec convergence_rate(Scheme s);

// smallest k with Cn^-(k+1) < 1/n: 2 for root-n schemes, 3 for cube-root schemes
int select_order(Scheme s);

struct CalibrationResult {
  int k = 0;
  RateSpec rate;
  double rho_hat = 0.0;
  double c_n = 1.0;
  int n_b = -1;
  int degenerate = 0;
  std::vector<double> draws;
};

double threshold_from_rho(int n, const RateSpec& rate, double rho_hat);

// percentile of the bootstrap statistic tau_n(Cn (eta* - q)) with eta* the
// (smoothed or step) resampled d.f. at the original quantile estimate
CalibrationResult calibrate_n_of_n(const CensoredSample& sample, double q, double alpha, int k,
                                   int B, std::uint64_t seed, bool smoothed = true,
                                   double em_tol = 1e-3, int em_max_iter = 10000);

// adaptive resample size: grid b_0 = ceil(sqrt(n)) stepped by d up to n^0.99,
// n_b chosen where consecutive stage percentiles stabilize, then the stage's
// draws are reused for the final percentile
CalibrationResult calibrate_m_of_n(const CensoredSample& sample, double q, double alpha, int k,
                                   int B, int d, std::uint64_t seed, bool smoothed = true,
                                   double em_tol = 1e-3, int em_max_iter = 10000);

}  // namespace welrci
