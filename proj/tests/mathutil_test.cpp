#include <doctest.h>

#include <vector>

#include "welrci/mathutil.hpp"

using welrci::chisq1_quantile;
using welrci::normal_quantile;
using welrci::upper_order_statistic;

TEST_CASE("normal quantile hits reference values") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.95) == doctest::Approx(1.6448536269514722).epsilon(1e-12));
}

TEST_CASE("normal quantile is antisymmetric") {
  for (double p : {0.01, 0.1, 0.3, 0.45}) {
    CHECK(normal_quantile(p) == doctest::Approx(-normal_quantile(1.0 - p)).epsilon(1e-12));
  }
}

TEST_CASE("normal quantile rejects levels outside (0,1)") {
  CHECK_THROWS(normal_quantile(0.0));
  CHECK_THROWS(normal_quantile(1.0));
  CHECK_THROWS(normal_quantile(-0.2));
}

TEST_CASE("chisq1 quantile hits reference values") {
  CHECK(chisq1_quantile(0.25) == doctest::Approx(0.10153104426762156).epsilon(1e-9));
  CHECK(chisq1_quantile(0.5) == doctest::Approx(0.454936423119572).epsilon(1e-9));
  CHECK(chisq1_quantile(0.75) == doctest::Approx(1.3233036969314664).epsilon(1e-9));
  CHECK(chisq1_quantile(0.90) == doctest::Approx(2.705543454095404).epsilon(1e-9));
}

TEST_CASE("upper order statistic follows the ceil(level*K) convention") {
  std::vector<double> v{5, 1, 4, 2, 3};
  CHECK(upper_order_statistic(v, 0.5) == 3);  // ceil(2.5) = 3rd smallest
  CHECK(upper_order_statistic(v, 0.9) == 5);  // ceil(4.5) = 5th
  CHECK(upper_order_statistic(v, 0.2) == 1);  // ceil(1.0) = 1st
  CHECK(upper_order_statistic(v, 1e-9) == 1); // clamps up to the 1st
  CHECK(upper_order_statistic(v, 2.0) == 5);  // clamps down to the Kth
  CHECK_THROWS(upper_order_statistic({}, 0.5));
}
