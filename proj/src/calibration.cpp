#include "welrci/calibration.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "welrci/mathutil.hpp"

namespace welrci {

double RateSpec::value(int n) const { return std::pow(static_cast<double>(n), exponent); }

RateSpec convergence_rate(Scheme s) {
  switch (s) {
    case Scheme::interval1:
    case Scheme::interval2: return {1.0 / 3.0};
    default: return {0.5};
  }
}

int select_order(Scheme s) { return convergence_rate(s).exponent == 0.5 ? 2 : 3; }

double threshold_from_rho(int n, const RateSpec& rate, double rho_hat) {
  if (rho_hat < 0.0) throw std::invalid_argument("threshold_from_rho: negative rho");
  double cn = rate.value(n);
  return std::exp(-0.5 * n / (cn * cn) * rho_hat);
}

namespace {

struct OriginalFit {
  DiscreteDistribution dist;
  double theta_hat;
  MomentSet mu;
  ExpansionCoefficients a;
};

OriginalFit fit_original(const CensoredSample& sample, double q, bool smoothed, double em_tol,
                         int em_max_iter) {
  OriginalFit f{fit_npmle(sample, em_tol, em_max_iter).first, 0.0, {}, {}};
  f.theta_hat =
      smoothed ? smoothed_quantile(f.dist, q) : raw_quantile(f.dist, q);
  f.mu = moments(f.dist, f.theta_hat, q, smoothed);
  if (!(f.mu.mu2 > 0.0))
    throw std::domain_error("calibrate: degenerate sample, mu2 vanishes at the quantile estimate");
  f.a = expansion_coefficients(f.mu);
  return f;
}

// eta* = resampled d.f. at the original theta_hat; empty when the replicate is
// degenerate (fit failure, theta_hat at or beyond the resampled support top,
// or vanishing resampled mu2 there)
std::optional<double> replicate_eta(const CensoredSample& sample, int size,
                                    const OriginalFit& orig, double q, bool smoothed,
                                    double em_tol, int em_max_iter, Rng& rng) {
  int n = sample.n();
  std::vector<int> idx(static_cast<std::size_t>(size));
  for (auto& i : idx) i = static_cast<int>(rng.bounded(static_cast<std::uint32_t>(n)));
  DiscreteDistribution dist;
  try {
    dist = fit_npmle(resample(sample, idx), em_tol, em_max_iter).first;
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (dist.m() < 1 || orig.theta_hat >= dist.w[dist.m() - 1]) return std::nullopt;
  if (!(moments(dist, orig.theta_hat, q, smoothed).mu2 > 0.0)) return std::nullopt;
  return smoothed ? smoothed_cdf_eval(dist, orig.theta_hat) : step_cdf_eval(dist, orig.theta_hat);
}

}  // namespace

CalibrationResult calibrate_n_of_n(const CensoredSample& sample, double q, double alpha, int k,
                                   int B, std::uint64_t seed, bool smoothed, double em_tol,
                                   int em_max_iter) {
  if (B < 1) throw std::invalid_argument("calibrate_n_of_n: B must be at least 1");
  if (convergence_rate(sample.scheme).exponent != 0.5)
    throw std::invalid_argument("calibrate_n_of_n: scheme needs the adaptive resample size");
  int n = sample.n();
  OriginalFit orig = fit_original(sample, q, smoothed, em_tol, em_max_iter);
  CalibrationResult res;
  res.k = k;
  res.rate = convergence_rate(sample.scheme);
  double cn = res.rate.value(n);
  res.draws.reserve(static_cast<std::size_t>(B));
  for (int rep = 0; rep < B; ++rep) {
    Rng rng(substream(seed, {static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(n)}));
    auto eta = replicate_eta(sample, n, orig, q, smoothed, em_tol, em_max_iter, rng);
    if (!eta) {
      ++res.degenerate;
      continue;
    }
    res.draws.push_back(tau_hat(cn * (*eta - q), orig.mu.mu2, orig.a, cn, k));
  }
  if (res.draws.empty()) throw std::runtime_error("calibrate_n_of_n: all replicates degenerate");
  res.rho_hat = upper_order_statistic(res.draws, 1.0 - alpha);
  res.c_n = threshold_from_rho(n, res.rate, res.rho_hat);
  return res;
}

CalibrationResult calibrate_m_of_n(const CensoredSample& sample, double q, double alpha, int k,
                                   int B, int d, std::uint64_t seed, bool smoothed, double em_tol,
                                   int em_max_iter) {
  if (B < 1) throw std::invalid_argument("calibrate_m_of_n: B must be at least 1");
  if (d < 1) throw std::invalid_argument("calibrate_m_of_n: grid step must be at least 1");
  if (convergence_rate(sample.scheme).exponent == 0.5)
    throw std::invalid_argument("calibrate_m_of_n: root-n schemes use the full resample size");
  int n = sample.n();
  std::vector<int> grid;
  double cap = std::pow(static_cast<double>(n), 0.99);
  for (int b = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
       static_cast<double>(b) <= cap; b += d)
    grid.push_back(b);
  if (grid.size() < 2)
    throw std::runtime_error("calibrate_m_of_n: resample-size grid too small for selection");

  OriginalFit orig = fit_original(sample, q, smoothed, em_tol, em_max_iter);
  CalibrationResult res;
  res.k = k;
  res.rate = convergence_rate(sample.scheme);
  double cn = res.rate.value(n);

  std::vector<std::optional<double>> xi(grid.size());
  std::vector<std::vector<double>> etas(grid.size());
  for (std::size_t s = 0; s < grid.size(); ++s) {
    int b = grid[s];
    auto& kept = etas[s];
    kept.reserve(static_cast<std::size_t>(B));
    for (int rep = 0; rep < B; ++rep) {
      Rng rng(substream(seed, {static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(b)}));
      auto eta = replicate_eta(sample, b, orig, q, smoothed, em_tol, em_max_iter, rng);
      if (!eta) {
        ++res.degenerate;
        continue;
      }
      kept.push_back(*eta);
    }
    if (2 * static_cast<int>(kept.size()) < B) continue;
    std::vector<double> stage(kept.size());
    double broot = std::cbrt(static_cast<double>(b));
    for (std::size_t i = 0; i < kept.size(); ++i) {
      double u = broot * (kept[i] - q);
      stage[i] = u * u / orig.mu.mu2;
    }
    xi[s] = upper_order_statistic(stage, 1.0 - alpha);
  }

  std::optional<std::size_t> pick;
  double best = kInf;
  for (std::size_t s = 1; s < grid.size(); ++s) {
    if (!xi[s] || !xi[s - 1]) continue;
    double gap = std::abs(*xi[s] - *xi[s - 1]);
    if (gap < best) {
      best = gap;
      pick = s;
    }
  }
  if (!pick) throw std::runtime_error("calibrate_m_of_n: all resample sizes degenerate");

  res.n_b = grid[*pick];
  double broot = std::cbrt(static_cast<double>(res.n_b));
  res.draws.reserve(etas[*pick].size());
  for (double eta : etas[*pick])
    res.draws.push_back(tau_hat(broot * (eta - q), orig.mu.mu2, orig.a, cn, k));
  res.rho_hat = upper_order_statistic(res.draws, 1.0 - alpha);
  res.c_n = threshold_from_rho(n, res.rate, res.rho_hat);
  return res;
}

}  // namespace welrci
