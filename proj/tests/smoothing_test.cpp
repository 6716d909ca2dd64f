#include <doctest.h>

#include <cmath>

#include "welrci/rng.hpp"
#include "welrci/smoothing.hpp"

using namespace welrci;

namespace {

DiscreteDistribution dist3() {
  DiscreteDistribution d;
  d.w = Eigen::Vector3d(1, 2, 3);
  d.p = Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3);
  d.n = 3;
  return d;
}

DiscreteDistribution dist2() {
  DiscreteDistribution d;
  d.w = Eigen::Vector2d(1, 2);
  d.p = Eigen::Vector2d(0.5, 0.5);
  d.n = 2;
  return d;
}

DiscreteDistribution random_dist(std::uint64_t seed, int m) {
  Rng rng(substream(17, {seed}));
  Eigen::VectorXd w(m), p(m);
  double acc = 0.0, sum = 0.0;
  for (int i = 0; i < m; ++i) {
    acc += rng.exponential(1.0) + 0.01;
    w[i] = acc;
    p[i] = rng.exponential(1.0) + 0.01;
    sum += p[i];
  }
  p /= sum;
  DiscreteDistribution d;
  d.w = w;
  d.p = p;
  d.n = m;
  return d;
}

}  // namespace

TEST_CASE("ramp weight of a cell") {
  DiscreteDistribution d = dist3();
  CHECK(h_weight(d.w, 2, 1.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(h_weight(d.w, 2, 3.0) == 1.0);
  CHECK(h_weight(d.w, 3, 1.5) == 0.0);
  CHECK(h_weight(d.w, 1, 0.5) == doctest::Approx(0.5).epsilon(1e-15));  // W_0 = 0 anchor
  CHECK(h_weight(d.w, 1, -1.0) == 0.0);
}

TEST_CASE("piecewise-linear d.f. evaluation") {
  DiscreteDistribution d = dist2();
  CHECK(smoothed_cdf_eval(d, 1.5) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(smoothed_cdf_eval(d, 2.0) == 1.0);
  CHECK(smoothed_cdf_eval(d, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(smoothed_cdf_eval(d, -3.0) == 0.0);
  CHECK(smoothed_cdf_eval(d, 9.0) == 1.0);
}

TEST_CASE("step d.f. evaluation and raw inverse") {
  DiscreteDistribution d = dist2();
  CHECK(step_cdf_eval(d, 0.99) == 0.0);
  CHECK(step_cdf_eval(d, 1.0) == doctest::Approx(0.5));
  CHECK(step_cdf_eval(d, 1.7) == doctest::Approx(0.5));
  CHECK(step_cdf_eval(d, 2.0) == 1.0);
  CHECK(raw_quantile(d, 0.3) == 1.0);
  CHECK(raw_quantile(d, 0.5) == 1.0);
  CHECK(raw_quantile(d, 0.51) == 2.0);
}

TEST_CASE("piecewise-linear inversion") {
  DiscreteDistribution d = dist2();
  CHECK(smoothed_quantile(d, 0.25) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(smoothed_quantile(d, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(smoothed_quantile(d, 0.75) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK_THROWS(smoothed_quantile(d, 0.0));
  CHECK_THROWS(smoothed_quantile(d, 1.0));
}

TEST_CASE("inversion round-trips through the d.f.") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    DiscreteDistribution d = random_dist(seed, 6);
    for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) {
      double theta = smoothed_quantile(d, q);
      CHECK(smoothed_cdf_eval(d, theta) == doctest::Approx(q).epsilon(1e-12));
    }
  }
}

TEST_CASE("smoothed moments of the three-point fixture") {
  MomentSet ms = moments(dist3(), 1.5, 0.5, true);
  CHECK(ms.eta_hat == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ms.mu2 == doctest::Approx(1.0 / 6).epsilon(1e-14));
  CHECK(ms.mu3 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(ms.mu3) < 1e-15);
  CHECK(ms.mu4 == doctest::Approx(1.0 / 24).epsilon(1e-14));
}

TEST_CASE("step-flavor moments of the three-point fixture") {
  MomentSet ms = moments(dist3(), 1.5, 0.5, false);
  Eigen::VectorXd u = u_weights(dist3(), 1.5, 0.5, false);
  REQUIRE(u.size() == 3);
  CHECK(u[0] == doctest::Approx(0.5));
  CHECK(u[1] == doctest::Approx(-0.5));
  CHECK(u[2] == doctest::Approx(-0.5));
  CHECK(ms.eta_hat == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(ms.mu2 == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(ms.mu3 == doctest::Approx(-1.0 / 24).epsilon(1e-14));
}

TEST_CASE("moments at the smoothed quantile recover the level exactly") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    DiscreteDistribution d = random_dist(seed, 5);
    for (double q : {0.2, 0.5, 0.8}) {
      double theta = smoothed_quantile(d, q);
      MomentSet ms = moments(d, theta, q, true);
      CHECK(ms.eta_hat == doctest::Approx(q).epsilon(1e-12));
      CHECK(ms.mu2 > 0.0);
      for (double mu : {ms.mu2, ms.mu3, ms.mu4, ms.mu5, ms.mu6}) CHECK(std::abs(mu) <= 1.0);
    }
  }
}

TEST_CASE("smoothing never strays further than the largest mass") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    DiscreteDistribution d = random_dist(seed, 7);
    double pmax = d.p.maxCoeff();
    double worst = 0.0;
    double hi = d.w[d.m() - 1] * 1.05;
    for (int g = 0; g <= 4000; ++g) {
      double x = hi * g / 4000.0;
      worst = std::max(worst, std::abs(smoothed_cdf_eval(d, x) - step_cdf_eval(d, x)));
    }
    CHECK(worst <= pmax + 1e-12);
  }
}

TEST_CASE("ramp weights and quantiles are scale equivariant") {
  DiscreteDistribution d = random_dist(3, 5);
  for (double c : {2.0, 0.5, 8.0}) {
    DiscreteDistribution s = d;
    s.w = d.w * c;
    for (int i = 1; i <= d.m(); ++i)
      CHECK(h_weight(s.w, i, c * 1.7) == doctest::Approx(h_weight(d.w, i, 1.7)).epsilon(1e-15));
    for (double q : {0.3, 0.6})
      CHECK(smoothed_quantile(s, q) == doctest::Approx(c * smoothed_quantile(d, q)).epsilon(1e-15));
  }
}
