#include "welrci/interval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace welrci {

std::pair<double, double> feasible_range(const DiscreteDistribution& d, double q, bool smoothed) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("feasible_range: q outside (0,1)");
  if (d.m() < 2)
    throw std::domain_error("feasible_range: single-atom support has no feasible range");
  int m = d.m();
  if (smoothed) return {q * d.w[0], d.w[m - 2] + q * (d.w[m - 1] - d.w[m - 2])};
  return {d.w[0], d.w[m - 1]};
}

namespace {

ConfidenceInterval welrci_smoothed(const DiscreteDistribution& d, double q, double c_n,
                                   double tstar) {
  ConfidenceInterval ci;
  ci.q = q;
  ci.c_n = c_n;
  ci.smoothed = true;
  auto [lo, hi] = feasible_range(d, q, true);
  ci.feasible_lo = lo;
  ci.feasible_hi = hi;
  double th = smoothed_quantile(d, q);
  ci.theta_hat = th;
  if (tstar <= 0.0) {
    ci.x_l = ci.x_u = th;
    return ci;
  }
  auto excess = [&](double t) { return neg2_log_welr(d, t, q, true).neg2logr - tstar; };
  int m = d.m();
  double range = d.w[m - 1] - d.w[0];
  double abs_tol = 1e-8 * range;
  double probe = 1e-12 * range;

  if (excess(lo + probe) < 0.0) {
    ci.x_l = lo;
    ci.clamped_lo = true;
  } else {
    double a = lo, b = th;
    while (b - a > abs_tol && ci.iterations < 200) {
      double mid = 0.5 * (a + b);
      if (excess(mid) > 0.0) a = mid;
      else b = mid;
      ++ci.iterations;
    }
    ci.x_l = 0.5 * (a + b);
  }
  if (excess(hi - probe) < 0.0) {
    ci.x_u = hi;
    ci.clamped_hi = true;
  } else {
    double a = th, b = hi;
    int it = 0;
    while (b - a > abs_tol && it < 200) {
      double mid = 0.5 * (a + b);
      if (excess(mid) < 0.0) a = mid;
      else b = mid;
      ++it;
    }
    ci.x_u = 0.5 * (a + b);
    ci.iterations += it;
  }
  return ci;
}

ConfidenceInterval welrci_step(const DiscreteDistribution& d, double q, double c_n,
                               double tstar) {
  ConfidenceInterval ci;
  ci.q = q;
  ci.c_n = c_n;
  ci.smoothed = false;
  auto [lo, hi] = feasible_range(d, q, false);
  ci.feasible_lo = lo;
  ci.feasible_hi = hi;
  double th = raw_quantile(d, q);
  ci.theta_hat = th;
  int m = d.m();

  // the ratio is constant on each [W_j, W_{j+1}); scan segments instead of bisecting
  std::vector<double> val(static_cast<std::size_t>(m - 1));
  for (int j = 0; j + 1 < m; ++j)
    val[static_cast<std::size_t>(j)] = neg2_log_welr(d, d.w[j], q, false).neg2logr;
  ci.iterations = m - 1;

  int idx = m - 1;
  double cum = 0.0;
  for (int i = 0; i < m; ++i) {
    cum += d.p[i];
    if (cum >= q) {
      idx = i;
      break;
    }
  }
  int jstart = std::min(idx, m - 2);
  if (val[static_cast<std::size_t>(jstart)] > tstar) {
    int jbest = static_cast<int>(std::min_element(val.begin(), val.end()) - val.begin());
    if (val[static_cast<std::size_t>(jbest)] > tstar) {
      ci.x_l = ci.x_u = th;
      ci.clamped_lo = ci.clamped_hi = true;
      return ci;
    }
    jstart = jbest;
  }
  int jlo = jstart, jhi = jstart;
  while (jlo > 0 && val[static_cast<std::size_t>(jlo - 1)] <= tstar) --jlo;
  while (jhi + 1 <= m - 2 && val[static_cast<std::size_t>(jhi + 1)] <= tstar) ++jhi;
  ci.x_l = d.w[jlo];
  ci.x_u = d.w[jhi + 1];
  ci.clamped_lo = jlo == 0;
  ci.clamped_hi = jhi == m - 2;
  return ci;
}

}  // namespace

ConfidenceInterval welrci(const DiscreteDistribution& d, double q, double c_n, bool smoothed) {
  if (!(c_n > 0.0 && c_n <= 1.0)) throw std::invalid_argument("welrci: c_n outside (0,1]");
  double tstar = -2.0 * std::log(c_n);
  return smoothed ? welrci_smoothed(d, q, c_n, tstar) : welrci_step(d, q, c_n, tstar);
}

std::pair<double, double> brute_force_bounds(const DiscreteDistribution& d, double q, double c_n,
                                             double grid_step, bool smoothed) {
  int m = d.m();
  if (m > 4) throw std::invalid_argument("brute_force_bounds: support too large for enumeration");
  if (!(grid_step > 0.0 && grid_step <= 0.1))
    throw std::invalid_argument("brute_force_bounds: grid_step outside (0, 0.1]");
  if (!(c_n > 0.0 && c_n <= 1.0)) throw std::invalid_argument("brute_force_bounds: c_n outside (0,1]");
  int steps = static_cast<int>(std::lround(1.0 / grid_step));
  double logc = std::log(c_n);

  double lo = kInf, hi = -kInf;
  DiscreteDistribution cand = d;
  auto consider = [&](const Eigen::VectorXd& p) {
    double logratio = 0.0;
    for (int i = 0; i < m; ++i) logratio += d.n * d.p[i] * (std::log(p[i]) - std::log(d.p[i]));
    if (logratio < logc - 1e-12) return;
    cand.p = p;
    double t = smoothed ? smoothed_quantile(cand, q) : raw_quantile(cand, q);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  };

  consider(d.p);
  Eigen::VectorXd p(m);
  std::vector<int> counts(static_cast<std::size_t>(m));
  // positive integer compositions of `steps` into m parts
  auto enumerate = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == m - 1) {
      counts[static_cast<std::size_t>(pos)] = remaining;
      if (remaining < 1) return;
      for (int i = 0; i < m; ++i) p[i] = static_cast<double>(counts[static_cast<std::size_t>(i)]) / steps;
      consider(p);
      return;
    }
    for (int c = 1; c <= remaining - (m - 1 - pos); ++c) {
      counts[static_cast<std::size_t>(pos)] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  if (m == 1) consider(Eigen::VectorXd::Ones(1));
  else enumerate(enumerate, 0, steps);
  return {lo, hi};
}

}  // namespace welrci
