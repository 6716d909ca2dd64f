#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "welrci/censoring.hpp"

namespace welrci {

// adjusted NPMLE: strictly increasing support w, positive masses p summing to 1
struct DiscreteDistribution {
  Eigen::VectorXd w;
  Eigen::VectorXd p;
  int n = 0;

  int m() const { return static_cast<int>(w.size()); }
};

struct EmReport {
  int iterations = 0;
  double final_sup_change = 0.0;
  bool converged = true;
};

DiscreteDistribution kaplan_meier(const std::vector<double>& v, const std::vector<int>& delta);

DiscreteDistribution pava_current_status(const std::vector<double>& y,
                                         const std::vector<int>& delta);

std::pair<DiscreteDistribution, EmReport> turnbull_em(
    const std::vector<CensoringInterval>& intervals, double tol = 1e-3, int max_iter = 10000);

std::pair<DiscreteDistribution, EmReport> fit_npmle(const CensoredSample& s, double tol = 1e-3,
                                                    int max_iter = 10000);

// max_j |p_j - n^-1 sum_i p_j 1{W_j in I_i} / sum_{l in I_i} p_l|, the
// self-consistency residual of a fit against its censoring intervals
double self_consistency_residual(const DiscreteDistribution& d,
                                 const std::vector<CensoringInterval>& intervals);

}  // namespace welrci
