#include "welrci/smoothing.hpp"

#include <stdexcept>

namespace welrci {

double h_weight(const Eigen::VectorXd& w, int i, double x) {
  if (i < 1 || i > static_cast<int>(w.size())) throw std::invalid_argument("h_weight: bad index");
  double lo = i == 1 ? 0.0 : w[i - 2];
  double hi = w[i - 1];
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  return (x - lo) / (hi - lo);
}

double smoothed_cdf_eval(const DiscreteDistribution& d, double x) {
  if (x <= 0.0) return 0.0;
  double cum = 0.0, prev = 0.0;
  for (int i = 0; i < d.m(); ++i) {
    if (x <= d.w[i]) return cum + d.p[i] * (x - prev) / (d.w[i] - prev);
    cum += d.p[i];
    prev = d.w[i];
  }
  return 1.0;
}

double step_cdf_eval(const DiscreteDistribution& d, double x) {
  double cum = 0.0;
  for (int i = 0; i < d.m() && d.w[i] <= x; ++i) cum += d.p[i];
  return cum;
}

double smoothed_quantile(const DiscreteDistribution& d, double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("smoothed_quantile: q outside (0,1)");
  double cum = 0.0, prev = 0.0;
  for (int i = 0; i < d.m(); ++i) {
    if (q <= cum + d.p[i]) return prev + (q - cum) / d.p[i] * (d.w[i] - prev);
    cum += d.p[i];
    prev = d.w[i];
  }
  return d.w[d.m() - 1];
}

double raw_quantile(const DiscreteDistribution& d, double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("raw_quantile: q outside (0,1)");
  double cum = 0.0;
  for (int i = 0; i < d.m(); ++i) {
    cum += d.p[i];
    if (cum >= q) return d.w[i];
  }
  return d.w[d.m() - 1];
}

Eigen::VectorXd u_weights(const DiscreteDistribution& d, double theta, double q, bool smoothed) {
  int m = d.m();
  Eigen::VectorXd u(m);
  if (smoothed) {
    double prev = 0.0;
    for (int i = 0; i < m; ++i) {
      double hi = d.w[i];
      double h = theta <= prev ? 0.0 : (theta >= hi ? 1.0 : (theta - prev) / (hi - prev));
      u[i] = h - q;
      prev = hi;
    }
  } else {
    for (int i = 0; i < m; ++i) u[i] = (d.w[i] <= theta ? 1.0 : 0.0) - q;
  }
  return u;
}

MomentSet moments(const DiscreteDistribution& d, double theta, double q, bool smoothed) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("moments: q outside (0,1)");
  Eigen::VectorXd u = u_weights(d, theta, q, smoothed);
  MomentSet ms;
  ms.theta = theta;
  ms.q = q;
  ms.smoothed = smoothed;
  ms.eta_hat = q + d.p.dot(u);
  Eigen::ArrayXd pw = d.p.array() * u.array() * u.array();
  ms.mu2 = pw.sum();
  pw *= u.array();
  ms.mu3 = pw.sum();
  pw *= u.array();
  ms.mu4 = pw.sum();
  pw *= u.array();
  ms.mu5 = pw.sum();
  pw *= u.array();
  ms.mu6 = pw.sum();
  return ms;
}

}  // namespace welrci
