#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "welrci/parallel.hpp"
#include "welrci/rng.hpp"

using welrci::Rng;
using welrci::substream;

TEST_CASE("substream keys are deterministic and path-sensitive") {
  CHECK(substream(1, {2, 3}) == substream(1, {2, 3}));
  CHECK(substream(1, {2, 3}) != substream(1, {3, 2}));
  CHECK(substream(1, {2, 3}) != substream(2, {2, 3}));
  CHECK(substream(1, {2}) != substream(1, {2, 0}));
}

TEST_CASE("u01 stays inside the open unit interval") {
  Rng rng(substream(7, {0}));
  for (int i = 0; i < 10000; ++i) {
    double u = rng.u01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("exponential and chisq1 sample means match their targets") {
  Rng rng(substream(7, {1}));
  const int n = 200000;
  double se = 0.0, sc = 0.0;
  for (int i = 0; i < n; ++i) {
    se += rng.exponential(3.0);
    sc += rng.chisq1();
  }
  CHECK(se / n == doctest::Approx(3.0).epsilon(0.02));
  CHECK(sc / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("normal sample moments match the standard normal") {
  Rng rng(substream(7, {2}));
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  CHECK(s / n == doctest::Approx(0.0).epsilon(1.0));
  CHECK(std::abs(s / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("bounded draws cover [0, n) roughly uniformly") {
  Rng rng(substream(7, {3}));
  std::vector<int> counts(10, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    std::uint32_t v = rng.bounded(10);
    REQUIRE(v < 10);
    ++counts[v];
  }
  for (int c : counts) CHECK(c == doctest::Approx(n / 10.0).epsilon(0.05));
}

TEST_CASE("identical keys replay identical streams") {
  Rng a(substream(9, {4}));
  Rng b(substream(9, {4}));
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("parallel_for covers every index exactly once") {
  const std::size_t n = 1000;
  std::vector<std::atomic<int>> seen(n);
  welrci::parallel_for(n, [&](std::size_t i) { seen[i].fetch_add(1); }, 4);
  for (const auto& s : seen) CHECK(s.load() == 1);
}

TEST_CASE("parallel_for rethrows a worker exception") {
  CHECK_THROWS_AS(welrci::parallel_for(
                      100,
                      [](std::size_t i) {
                        if (i == 37) throw std::runtime_error("boom");
                      },
                      4),
                  std::runtime_error);
}
