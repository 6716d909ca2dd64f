#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "welrci/npmle.hpp"
#include "welrci/rng.hpp"

using namespace welrci;

namespace {

double cdf_at(const DiscreteDistribution& d, double x) {
  double f = 0.0;
  for (int i = 0; i < d.m(); ++i)
    if (d.w[i] <= x) f += d.p[i];
  return f;
}

double sup_cdf_diff(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  double worst = 0.0;
  for (int i = 0; i < a.m(); ++i) worst = std::max(worst, std::abs(cdf_at(a, a.w[i]) - cdf_at(b, a.w[i])));
  for (int i = 0; i < b.m(); ++i) worst = std::max(worst, std::abs(cdf_at(a, b.w[i]) - cdf_at(b, b.w[i])));
  return worst;
}

void check_proper(const DiscreteDistribution& d) {
  REQUIRE(d.m() >= 1);
  double sum = 0.0;
  for (int i = 0; i < d.m(); ++i) {
    CHECK(d.p[i] > 0.0);
    sum += d.p[i];
    if (i > 0) CHECK(d.w[i] > d.w[i - 1]);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

CensoredSample sample_from(const std::string& text, Scheme scheme) {
  std::istringstream in(text);
  return parse_sample(in, scheme);
}

}  // namespace

TEST_CASE("product-limit masses with censoring in the middle") {
  DiscreteDistribution d = kaplan_meier({1, 2, 3}, {1, 0, 1});
  REQUIRE(d.m() == 2);
  CHECK(d.w[0] == 1.0);
  CHECK(d.w[1] == 3.0);
  CHECK(d.p[0] == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(d.p[1] == doctest::Approx(2.0 / 3).epsilon(1e-14));
  check_proper(d);
}

TEST_CASE("censored maximum receives the remaining mass") {
  DiscreteDistribution d = kaplan_meier({1, 2}, {1, 0});
  REQUIRE(d.m() == 2);
  CHECK(d.w[1] == 2.0);
  CHECK(d.p[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(d.p[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("uncensored data reduce to the empirical distribution") {
  DiscreteDistribution d = kaplan_meier({2, 1, 3}, {1, 1, 1});
  REQUIRE(d.m() == 3);
  CHECK(d.w[0] == 1.0);
  for (int i = 0; i < 3; ++i) CHECK(d.p[i] == doctest::Approx(1.0 / 3).epsilon(1e-14));
}

TEST_CASE("ties put deaths before censorings") {
  // censored at 1 before the death at 1 would lose the death's risk set
  DiscreteDistribution d = kaplan_meier({1, 1}, {0, 1});
  REQUIRE(d.m() == 1);
  CHECK(d.w[0] == 1.0);
  CHECK(d.p[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS(kaplan_meier({}, {}));
}

TEST_CASE("isotonic fit pools the violating pair and jumps at block starts") {
  DiscreteDistribution d = pava_current_status({1, 2, 3}, {0, 1, 0});
  REQUIRE(d.m() == 2);
  CHECK(d.w[0] == 2.0);
  CHECK(d.w[1] == 3.0);
  CHECK(d.p[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(d.p[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("already isotonic indicators keep their single jump") {
  DiscreteDistribution d = pava_current_status({1, 2, 3}, {0, 0, 1});
  REQUIRE(d.m() == 1);
  CHECK(d.w[0] == 3.0);
  CHECK(d.p[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("all-one indicators put the mass at the smallest examination time") {
  DiscreteDistribution d = pava_current_status({3, 1, 2}, {1, 1, 1});
  REQUIRE(d.m() == 1);
  CHECK(d.w[0] == 1.0);
  CHECK(d.p[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("exact-only intervals converge in one sweep") {
  std::vector<CensoringInterval> iv{{1, 1, true}, {2, 2, true}, {3, 3, true}};
  auto [d, rep] = turnbull_em(iv, 1e-3, 10);
  CHECK(rep.converged);
  REQUIRE(d.m() == 3);
  for (int i = 0; i < 3; ++i) CHECK(d.p[i] == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("right-censored reduction agrees with the product-limit fit") {
  Rng rng(substream(11, {0}));
  std::vector<double> v;
  std::vector<int> del;
  for (int i = 0; i < 30; ++i) {
    double x = rng.exponential(1.0), y = rng.exponential(3.0);
    v.push_back(std::min(x, y));
    del.push_back(x <= y ? 1 : 0);
  }
  DiscreteDistribution km = kaplan_meier(v, del);
  std::vector<CensoringInterval> iv;
  for (int i = 0; i < 30; ++i)
    iv.push_back(del[i] ? CensoringInterval{v[i], v[i], true} : CensoringInterval{v[i], kInf, false});
  double tol = 1e-8;
  auto [em, rep] = turnbull_em(iv, tol, 100000);
  CHECK(rep.converged);
  CHECK(sup_cdf_diff(km, em) < 10 * tol);
}

TEST_CASE("current-status reduction agrees with the isotonic fit") {
  Rng rng(substream(11, {1}));
  std::vector<double> y;
  std::vector<int> del;
  for (int i = 0; i < 30; ++i) {
    double x = rng.exponential(1.0), t = rng.exponential(1.0);
    y.push_back(t);
    del.push_back(x <= t ? 1 : 0);
  }
  DiscreteDistribution pava = pava_current_status(y, del);
  std::vector<CensoringInterval> iv;
  for (int i = 0; i < 30; ++i)
    iv.push_back(del[i] ? CensoringInterval{0.0, y[i], false} : CensoringInterval{y[i], kInf, false});
  double tol = 1e-8;
  auto [em, rep] = turnbull_em(iv, tol, 100000);
  CHECK(rep.converged);
  CHECK(sup_cdf_diff(pava, em) < 10 * tol);
}

TEST_CASE("non-convergence raises instead of returning a bad fit") {
  std::vector<CensoringInterval> iv{{1, 1, true}, {3, 3, true}, {0, 2, false}};
  CHECK_THROWS(turnbull_em(iv, 1e-9, 1));
  CHECK_THROWS(turnbull_em({}, 1e-3, 100));
}

TEST_CASE("left-censored mass lands on the atom inside its window") {
  std::vector<CensoringInterval> iv{{1, 1, true}, {3, 3, true}, {0, 2, false}};
  auto [d, rep] = turnbull_em(iv, 1e-10, 10000);
  REQUIRE(d.m() == 2);
  CHECK(d.w[0] == 1.0);
  CHECK(d.w[1] == 3.0);
  CHECK(d.p[0] == doctest::Approx(2.0 / 3).epsilon(1e-8));
  CHECK(d.p[1] == doctest::Approx(1.0 / 3).epsilon(1e-8));
  CHECK(self_consistency_residual(d, iv) < 1e-8);
}

TEST_CASE("trailing unbounded interval keeps a representative atom") {
  std::vector<CensoringInterval> iv{{1, 1, true}, {2, kInf, false}};
  auto [d, rep] = turnbull_em(iv, 1e-10, 10000);
  REQUIRE(d.m() == 2);
  CHECK(d.w[1] == 2.0);
  CHECK(d.p[0] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(d.p[1] == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("dispatch sends each scheme to its engine") {
  CensoredSample rc = sample_from("v,delta\n1,1\n2,0\n3,1\n", Scheme::right);
  auto [d1, r1] = fit_npmle(rc);
  DiscreteDistribution km = kaplan_meier(rc.v, rc.delta);
  REQUIRE(d1.m() == km.m());
  for (int i = 0; i < km.m(); ++i) {
    CHECK(d1.w[i] == km.w[i]);
    CHECK(d1.p[i] == km.p[i]);
  }
  CHECK(d1.n == 3);

  CensoredSample db = sample_from("v,delta\n1,1\n3,1\n2,3\n", Scheme::doubly);
  auto [d2, r2] = fit_npmle(db, 1e-8, 100000);
  check_proper(d2);
  for (int i = 0; i < d2.m(); ++i) CHECK((d2.w[i] == 1.0 || d2.w[i] == 2.0 || d2.w[i] == 3.0));
  CHECK(self_consistency_residual(d2, to_intervals(db)) < 10 * 1e-8);
}

TEST_CASE("ties in exact data collapse into one atom") {
  CensoredSample s = sample_from("v\n5\n5\n7\n", Scheme::none);
  auto [d, rep] = fit_npmle(s);
  REQUIRE(d.m() == 2);
  CHECK(d.w[0] == 5.0);
  CHECK(d.w[1] == 7.0);
  CHECK(d.p[0] == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(d.p[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("fits satisfy the distribution invariants on random inputs") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(substream(13, {seed}));
    std::vector<CensoringInterval> iv;
    for (int i = 0; i < 15; ++i) {
      double a = rng.exponential(1.0);
      int kind = static_cast<int>(rng.bounded(3));
      if (kind == 0) iv.push_back({a, a, true});
      else if (kind == 1) iv.push_back({a, kInf, false});
      else iv.push_back({0.0, a, false});
    }
    auto [d, rep] = turnbull_em(iv, 1e-6, 100000);
    check_proper(d);
    CHECK(rep.converged);
  }
}

TEST_CASE("largest support point carries the cumulative mass to one") {
  // adjustment rule: the d.f. reaches 1 at the largest observation endpoint
  Rng rng(substream(13, {99}));
  std::vector<double> v;
  std::vector<int> del;
  double vmax = 0.0;
  for (int i = 0; i < 25; ++i) {
    double x = rng.exponential(1.0), y = rng.exponential(3.0);
    v.push_back(std::min(x, y));
    del.push_back(x <= y ? 1 : 0);
    vmax = std::max(vmax, v.back());
  }
  DiscreteDistribution d = kaplan_meier(v, del);
  CHECK(d.w[d.m() - 1] <= vmax);
  CHECK(cdf_at(d, vmax) == doctest::Approx(1.0).epsilon(1e-12));
}
