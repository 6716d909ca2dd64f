#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace welrci {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// substream key from a seed and a path of indices; independent of evaluation order
inline std::uint64_t substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t key = seed;
  for (std::uint64_t c : path) {
    std::uint64_t s = key ^ (c + 0x9e3779b97f4a7c15ull);
    key = splitmix64(s);
  }
  return key;
}

// deterministic generator with explicit transforms so results do not depend on
// the standard library's distribution implementations
class Rng {
 public:
  explicit Rng(std::uint64_t key) : gen_(key) {}

  std::uint64_t next() { return gen_(); }

  // uniform on the open interval (0,1)
  double u01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  // exponential with MEAN mu
  double exponential(double mu) { return -mu * std::log(u01()); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double r = std::sqrt(-2.0 * std::log(u01()));
    double a = 2.0 * std::numbers::pi * u01();
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double chisq1() {
    double z = normal();
    return z * z;
  }

  // uniform integer in [0, n) by Lemire's multiply-shift rejection
  std::uint32_t bounded(std::uint32_t n) {
    std::uint64_t x = next() >> 32;
    std::uint64_t m = x * n;
    auto l = static_cast<std::uint32_t>(m);
    if (l < n) {
      std::uint32_t t = (-n) % n;
      while (l < t) {
        x = next() >> 32;
        m = x * n;
        l = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace welrci
