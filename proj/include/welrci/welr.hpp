#pragma once

#include "welrci/smoothing.hpp"

namespace welrci {

struct WelrEvaluation {
  double lambda0 = 0.0;
  double neg2logr = 0.0;
  bool feasible = false;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

// root of g(lambda) = sum p_i U_i / (1 + lambda U_i) inside (-1/U_max, -1/U_min);
// requires min U < 0 < max U
double solve_lambda(const Eigen::VectorXd& p, const Eigen::VectorXd& u);

// -2 log r(theta); +inf with feasible=false when theta is outside the
// feasible range (the constraint set is empty there)
WelrEvaluation neg2_log_welr(const DiscreteDistribution& d, double theta, double q, bool smoothed);

struct ExpansionCoefficients {
  double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
};

ExpansionCoefficients expansion_coefficients(const MomentSet& mu);

// tau_n(u) = u^2/mu2 * (1 + sum_{j<=k} (a_j / Cn^j) u^j)
double tau_hat(double u, double mu2, const ExpansionCoefficients& a, double cn, int k);

// A_n^(k) = tau_n(Cn (eta_hat - q)), the k-th order expansion of -2 log r
double expansion_statistic(int n, double cn, const MomentSet& mu, int k);

}  // namespace welrci
