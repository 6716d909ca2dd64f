#pragma once

#include <istream>
#include <limits>
#include <string>
#include <vector>

#include "welrci/rng.hpp"

namespace welrci {

enum class Scheme { right, doubly, interval1, interval2, partly1, partly_general, none };

Scheme parse_scheme(const std::string& name);
std::string scheme_name(Scheme s);

// X lies in (left, right]; exact means X = left = right observed exactly
struct CensoringInterval {
  double left = 0.0;
  double right = 0.0;
  bool exact = false;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// scheme-tagged observation columns; per-scheme meaning:
//   right/doubly : v = V, delta in {0,1} / {1,2,3}
//   interval1    : v = examination time Y, delta in {0,1} (1 means X <= Y)
//   interval2    : v = Y, z = Z with Z < Y, delta in {1,2,3}
//   partly1      : kind 0 -> v = exact X; kind 1 -> v = Y, delta in {0,1}
//   partly_general: kind 0 -> v = exact X; kind 1 -> delta = cell index j in 1..N+1
//   none         : v = exact X
// direct is non-empty only for samples loaded from the unified left,right format
struct CensoredSample {
  Scheme scheme = Scheme::none;
  std::vector<double> v;
  std::vector<double> z;
  std::vector<int> delta;
  std::vector<int> kind;
  std::vector<double> grid;
  std::vector<CensoringInterval> direct;

  int n() const { return static_cast<int>(direct.empty() ? v.size() : direct.size()); }
};

CensoredSample parse_sample(std::istream& in, Scheme scheme);
CensoredSample load_csv(const std::string& path, Scheme scheme);

std::vector<CensoringInterval> to_intervals(const CensoredSample& s);

// index-subset resample (with replacement indices produced by the caller)
CensoredSample resample(const CensoredSample& s, const std::vector<int>& idx);

enum class Lifetime { exponential, chisq1 };

// presets: table1/table2 right censoring with Y ~ Exp(3); table3/table4 doubly
// censored with Z = (2/3)Y - 2.5; table5 current status with Y ~ Exp(1);
// interval2 generation is plumbing with no preset behind it
struct GeneratorParams {
  Scheme scheme = Scheme::right;
  Lifetime lifetime = Lifetime::exponential;
  double lifetime_mean = 1.0;
  double censor_mean = 3.0;
  double doubly_scale = 2.0 / 3.0;
  double doubly_shift = -2.5;
  double interval2_gap_mean = 1.0;
};

GeneratorParams preset_params(const std::string& name);
bool is_preset(const std::string& name);

CensoredSample generate(const GeneratorParams& params, int n, std::uint64_t seed);

// analytic quantile of the lifetime distribution (censoring leaves it unchanged)
double true_quantile(const GeneratorParams& params, double q);

}  // namespace welrci
