#pragma once

#include "welrci/npmle.hpp"

namespace welrci {

// ramp weight of support cell i (1-based, anchored at W_0 = 0):
// 0 at or below W_{i-1}, linear on (W_{i-1}, W_i], 1 above W_i
double h_weight(const Eigen::VectorXd& w, int i, double x);

// piecewise-linear d.f. interpolating the step d.f. at its jump points
double smoothed_cdf_eval(const DiscreteDistribution& d, double x);

// right-continuous step d.f. of the fit
double step_cdf_eval(const DiscreteDistribution& d, double x);

// exact inverse of the piecewise-linear d.f.
double smoothed_quantile(const DiscreteDistribution& d, double q);

// generalized inverse min{W_i : F(W_i) >= q} of the step d.f.
double raw_quantile(const DiscreteDistribution& d, double q);

struct MomentSet {
  double theta = 0.0;
  double q = 0.0;
  double eta_hat = 0.0;
  double mu2 = 0.0, mu3 = 0.0, mu4 = 0.0, mu5 = 0.0, mu6 = 0.0;
  bool smoothed = true;
};

// weights U_i = H_i(W,theta) - q (smoothed) or 1{W_i <= theta} - q (step flavor)
Eigen::VectorXd u_weights(const DiscreteDistribution& d, double theta, double q, bool smoothed);

MomentSet moments(const DiscreteDistribution& d, double theta, double q, bool smoothed);

}  // namespace welrci
