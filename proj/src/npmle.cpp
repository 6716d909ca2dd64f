#include "welrci/npmle.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace welrci {

namespace {

DiscreteDistribution make_dist(const std::vector<double>& w, const std::vector<double>& p, int n) {
  if (w.empty()) throw std::runtime_error("npmle: empty support");
  DiscreteDistribution d;
  d.w = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  d.p = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
  d.p /= d.p.sum();
  d.n = n;
  for (int i = 0; i + 1 < d.m(); ++i) assert(d.w[i] < d.w[i + 1]);
  assert((d.p.array() > 0.0).all());
  return d;
}

}  // namespace

DiscreteDistribution kaplan_meier(const std::vector<double>& v, const std::vector<int>& delta) {
  auto n = v.size();
  if (n == 0) throw std::invalid_argument("kaplan_meier: empty sample");
  if (delta.size() != n) throw std::invalid_argument("kaplan_meier: size mismatch");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (v[a] != v[b]) return v[a] < v[b];
    return delta[a] > delta[b];
  });
  std::vector<double> w, p;
  double surv = 1.0;
  double at_risk = static_cast<double>(n);
  std::size_t i = 0;
  while (i < n) {
    double t = v[order[i]];
    int deaths = 0;
    std::size_t j = i;
    while (j < n && v[order[j]] == t) {
      deaths += delta[order[j]] == 1;
      ++j;
    }
    if (deaths > 0) {
      double snew = surv * (1.0 - static_cast<double>(deaths) / at_risk);
      w.push_back(t);
      p.push_back(surv - snew);
      surv = snew;
    }
    at_risk -= static_cast<double>(j - i);
    i = j;
  }
  if (surv > 1e-12) {
    double vmax = v[order[n - 1]];
    if (!w.empty() && w.back() == vmax) p.back() += surv;
    else {
      w.push_back(vmax);
      p.push_back(surv);
    }
  }
  return make_dist(w, p, static_cast<int>(n));
}

DiscreteDistribution pava_current_status(const std::vector<double>& y,
                                         const std::vector<int>& delta) {
  auto n = y.size();
  if (n == 0) throw std::invalid_argument("pava_current_status: empty sample");
  if (delta.size() != n) throw std::invalid_argument("pava_current_status: size mismatch");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });

  // pool ties in y, then isotonic regression of the indicators;
  // each block keeps its FIRST examination time: that is where the fitted
  // d.f. jumps, matching the innermost right endpoints of the interval reduction
  struct Block {
    double y_first;
    double sum;
    double weight;
  };
  std::vector<Block> blocks;
  std::size_t i = 0;
  while (i < n) {
    double t = y[order[i]];
    double s = 0.0;
    std::size_t j = i;
    while (j < n && y[order[j]] == t) {
      s += delta[order[j]];
      ++j;
    }
    blocks.push_back({t, s, static_cast<double>(j - i)});
    while (blocks.size() > 1) {
      auto& a = blocks[blocks.size() - 2];
      auto& b = blocks.back();
      if (a.sum * b.weight < b.sum * a.weight) break;
      a.sum += b.sum;
      a.weight += b.weight;
      blocks.pop_back();
    }
    i = j;
  }
  std::vector<double> w, p;
  double f = 0.0;
  for (const auto& b : blocks) {
    double fit = b.sum / b.weight;
    if (fit > f + 1e-15) {
      w.push_back(b.y_first);
      p.push_back(fit - f);
      f = fit;
    }
  }
  if (f < 1.0 - 1e-12) {
    double ymax = y[order[n - 1]];
    if (!w.empty() && w.back() == ymax) p.back() += 1.0 - f;
    else {
      w.push_back(ymax);
      p.push_back(1.0 - f);
    }
  }
  return make_dist(w, p, static_cast<int>(n));
}

std::pair<DiscreteDistribution, EmReport> turnbull_em(
    const std::vector<CensoringInterval>& intervals, double tol, int max_iter) {
  auto n = intervals.size();
  if (n == 0) throw std::invalid_argument("turnbull_em: empty interval list");
  if (!(tol > 0.0)) throw std::invalid_argument("turnbull_em: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("turnbull_em: max_iter must be at least 1");

  // ranks order tokens at equal values: closed left end (0) opens before a
  // right end (1); an open left end (2) opens after it
  struct Tok {
    double value;
    int rank;
    bool left;
  };
  std::vector<Tok> toks;
  toks.reserve(2 * n);
  double vmax = 0.0;
  for (const auto& ci : intervals) {
    double fin = ci.exact ? ci.left : (std::isfinite(ci.right) ? ci.right : ci.left);
    vmax = std::max(vmax, fin);
    if (ci.exact) {
      toks.push_back({ci.left, 0, true});
      toks.push_back({ci.left, 1, false});
    } else {
      toks.push_back({ci.left, 2, true});
      if (std::isfinite(ci.right)) toks.push_back({ci.right, 1, false});
    }
  }
  std::sort(toks.begin(), toks.end(), [](const Tok& a, const Tok& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.rank < b.rank;
  });

  // innermost intervals: each left token immediately followed by a right token
  struct Inner {
    double left;
    int lrank;
    double right;
  };
  std::vector<Inner> inner;
  bool have_l = false;
  double lval = 0.0;
  int lrank = 0;
  for (const auto& t : toks) {
    if (t.left) {
      have_l = true;
      lval = t.value;
      lrank = t.rank;
    } else if (have_l) {
      inner.push_back({lval, lrank, t.value});
      have_l = false;
    }
  }
  if (have_l) inner.push_back({lval, lrank, kInf});
  auto m = inner.size();

  std::vector<double> atoms(m);
  for (std::size_t j = 0; j < m; ++j)
    atoms[j] = std::isfinite(inner[j].right) ? inner[j].right : vmax;

  // member innermost intervals of each observation form a contiguous range
  std::vector<std::size_t> jlo(n), jhi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ci = intervals[i];
    double lo = ci.left;
    int lor = ci.exact ? 0 : 2;
    double hi = ci.exact ? ci.left : ci.right;
    std::size_t a = 0;
    while (a < m && (inner[a].left < lo || (inner[a].left == lo && inner[a].lrank < lor))) ++a;
    std::size_t b = m;
    while (b > a && !(inner[b - 1].right <= hi)) --b;
    if (a >= b) throw std::logic_error("turnbull_em: observation covers no candidate atom");
    jlo[i] = a;
    jhi[i] = b - 1;
  }

  std::vector<double> p(m, 1.0 / static_cast<double>(m));
  std::vector<double> cums(m), diff(m + 1), pnew(m);
  EmReport report;
  report.converged = false;
#ifndef NDEBUG
  double prev_loglik = -kInf;
#endif
  for (int it = 1; it <= max_iter; ++it) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      acc += p[j];
      cums[j] = acc;
      diff[j] = 0.0;
    }
    diff[m] = 0.0;
#ifndef NDEBUG
    double loglik = 0.0;
#endif
    for (std::size_t i = 0; i < n; ++i) {
      double denom = cums[jhi[i]] - (jlo[i] > 0 ? cums[jlo[i] - 1] : 0.0);
      double inv = 1.0 / denom;
      diff[jlo[i]] += inv;
      diff[jhi[i] + 1] -= inv;
#ifndef NDEBUG
      loglik += std::log(denom);
#endif
    }
#ifndef NDEBUG
    assert(loglik >= prev_loglik - 1e-9);
    prev_loglik = loglik;
#endif
    double factor = 0.0;
    double cum_old = 0.0, cum_new = 0.0, sup = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      factor += diff[j];
      pnew[j] = p[j] * factor / static_cast<double>(n);
      cum_old += p[j];
      cum_new += pnew[j];
      sup = std::max(sup, std::abs(cum_new - cum_old));
    }
    p.swap(pnew);
    report.iterations = it;
    double prev_sup = report.final_sup_change;
    report.final_sup_change = sup;
    if (sup < tol) {
      // geometric-decay extrapolation so the distance to the fixed point,
      // not just the step size, is below tol
      double r = it > 1 ? sup / prev_sup : 1.0;
      if (sup <= 1e-15 || (r < 1.0 && sup * r / (1.0 - r) <= tol)) {
        report.converged = true;
        break;
      }
    }
  }
  if (!report.converged)
    throw std::runtime_error("turnbull_em: no convergence after " +
                             std::to_string(report.iterations) + " iterations (sup change " +
                             std::to_string(report.final_sup_change) + ")");

  // prune the mass floor, then merge equal atoms (the unbounded representative
  // can coincide with the last finite right endpoint)
  std::vector<double> w2, p2;
  for (std::size_t j = 0; j < m; ++j) {
    if (p[j] < 1e-10) continue;
    if (!w2.empty() && atoms[j] == w2.back()) p2.back() += p[j];
    else {
      w2.push_back(atoms[j]);
      p2.push_back(p[j]);
    }
  }
  return {make_dist(w2, p2, static_cast<int>(n)), report};
}

std::pair<DiscreteDistribution, EmReport> fit_npmle(const CensoredSample& s, double tol,
                                                    int max_iter) {
  if (s.direct.empty()) {
    if (s.scheme == Scheme::right) return {kaplan_meier(s.v, s.delta), EmReport{}};
    if (s.scheme == Scheme::interval1) return {pava_current_status(s.v, s.delta), EmReport{}};
  }
  return turnbull_em(to_intervals(s), tol, max_iter);
}

double self_consistency_residual(const DiscreteDistribution& d,
                                 const std::vector<CensoringInterval>& intervals) {
  auto n = intervals.size();
  int m = d.m();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (const auto& ci : intervals) {
    double denom = 0.0;
    for (int j = 0; j < m; ++j) {
      bool member = ci.exact ? d.w[j] == ci.left : (d.w[j] > ci.left && d.w[j] <= ci.right);
      if (member) denom += d.p[j];
    }
    if (denom <= 0.0) return kInf;
    for (int j = 0; j < m; ++j) {
      bool member = ci.exact ? d.w[j] == ci.left : (d.w[j] > ci.left && d.w[j] <= ci.right);
      if (member) rhs[j] += d.p[j] / denom;
    }
  }
  rhs /= static_cast<double>(n);
  return (rhs - d.p).cwiseAbs().maxCoeff();
}

}  // namespace welrci
