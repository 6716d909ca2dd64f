#include "welrci/welr.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace welrci {

double solve_lambda(const Eigen::VectorXd& p, const Eigen::VectorXd& u) {
  double umin = u.minCoeff(), umax = u.maxCoeff();
  if (!(umin < 0.0 && 0.0 < umax)) throw std::domain_error("solve_lambda: infeasible weights");
  auto g = [&](double lam) { return (p.array() * u.array() / (1.0 + lam * u.array())).sum(); };
  double lo = -1.0 / umax, hi = -1.0 / umin;
  double width = hi - lo;
  lo += 1e-12 * width;
  hi -= 1e-12 * width;
  // g is strictly decreasing on the bracket; g(0) = eta_hat - q
  if (g(lo) < 0.0) return lo;
  if (g(hi) > 0.0) return hi;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double gm = g(mid);
    if (std::abs(gm) < 1e-12) return mid;
    if (gm > 0.0) lo = mid;
    else hi = mid;
    if (hi - lo < 1e-14 * width) break;
  }
  return 0.5 * (lo + hi);
}

WelrEvaluation neg2_log_welr(const DiscreteDistribution& d, double theta, double q,
                             bool smoothed) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("neg2_log_welr: q outside (0,1)");
  WelrEvaluation ev;
  Eigen::VectorXd u = u_weights(d, theta, q, smoothed);
  double umin = u.minCoeff(), umax = u.maxCoeff();
  if (!(umin < 0.0 && 0.0 < umax)) {
    ev.feasible = false;
    ev.neg2logr = kInf;
    return ev;
  }
  ev.feasible = true;
  ev.bracket_lo = -1.0 / umax;
  ev.bracket_hi = -1.0 / umin;
  ev.lambda0 = solve_lambda(d.p, u);
  ev.neg2logr =
      2.0 * d.n * (d.p.array() * (ev.lambda0 * u.array()).log1p()).sum();
  if (ev.neg2logr < 0.0) ev.neg2logr = 0.0;
  return ev;
}

ExpansionCoefficients expansion_coefficients(const MomentSet& mu) {
  if (!(mu.mu2 > 0.0)) throw std::domain_error("expansion_coefficients: mu2 must be positive");
  double m2 = mu.mu2, m3 = mu.mu3, m4 = mu.mu4, m5 = mu.mu5, m6 = mu.mu6;
  ExpansionCoefficients a;
  a.a1 = 2.0 * m3 / (3.0 * m2 * m2);
  double im2 = 1.0 / m2;
  double im4 = im2 * im2 * im2 * im2;
  a.a2 = im4 * (m3 * m3 - 0.5 * m2 * m4);
  double im6 = im4 * im2 * im2;
  a.a3 = 2.0 * im6 * (m3 * m3 * m3 + 0.2 * m2 * m2 * m5 - m2 * m3 * m4);
  double im8 = im6 * im2 * im2;
  a.a4 = im8 * ((14.0 / 3.0) * m3 * m3 * m3 * m3 - (1.0 / 3.0) * m2 * m2 * m2 * m6 +
                m2 * m2 * m4 * m4 + 2.0 * m2 * m2 * m3 * m5 - 7.0 * m2 * m3 * m3 * m4);
  return a;
}

double tau_hat(double u, double mu2, const ExpansionCoefficients& a, double cn, int k) {
  if (k < 0 || k > 4) throw std::invalid_argument("tau_hat: order outside 0..4");
  double coef[4] = {a.a1, a.a2, a.a3, a.a4};
  double corr = 1.0;
  double upow = 1.0;
  double cpow = 1.0;
  for (int j = 1; j <= k; ++j) {
    upow *= u;
    cpow *= cn;
    corr += coef[j - 1] / cpow * upow;
  }
  return u * u / mu2 * corr;
}

double expansion_statistic(int n, double cn, const MomentSet& mu, int k) {
  if (!(mu.mu2 > 0.0)) throw std::domain_error("expansion_statistic: mu2 must be positive");
  assert(n >= 1);
  ExpansionCoefficients a = expansion_coefficients(mu);
  return tau_hat(cn * (mu.eta_hat - mu.q), mu.mu2, a, cn, k);
}

}  // namespace welrci
