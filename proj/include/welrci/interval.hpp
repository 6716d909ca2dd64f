#pragma once

#include <utility>

#include "welrci/welr.hpp"

namespace welrci {

struct ConfidenceInterval {
  double x_l = 0.0;
  double x_u = 0.0;
  double q = 0.0;
  double alpha = 0.0;
  int k = 0;
  double c_n = 1.0;
  bool smoothed = true;
  double theta_hat = 0.0;
  double feasible_lo = 0.0;
  double feasible_hi = 0.0;
  bool clamped_lo = false;
  bool clamped_hi = false;
  int iterations = 0;
};

// open theta range where min U < 0 < max U holds
std::pair<double, double> feasible_range(const DiscreteDistribution& d, double q, bool smoothed);

// level set {theta : -2 log r(theta) <= -2 log c_n}; endpoints by bisection
// against the profile ratio (smoothed) or by exact scan over the support
// atoms (step flavor, where the ratio is piecewise constant)
ConfidenceInterval welrci(const DiscreteDistribution& d, double q, double c_n, bool smoothed);

// simplex-enumeration oracle realizing the defining optimization directly;
// small supports only (m <= 4)
std::pair<double, double> brute_force_bounds(const DiscreteDistribution& d, double q, double c_n,
                                             double grid_step, bool smoothed);

}  // namespace welrci
