#include "fris/common.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

namespace fris {

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normalized_sinc(double x) {
  if (x == 0.0) return 1.0;
  // Reduce to sin(pi r) with r in [-0.5, 0.5] so integer arguments give an exact zero.
  const double n = std::nearbyint(x);
  const double r = x - n;
  if (r == 0.0) return 0.0;
  const double sign = std::fmod(std::fabs(n), 2.0) == 1.0 ? -1.0 : 1.0;
  return sign * std::sin(std::numbers::pi * r) / (std::numbers::pi * x);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  __extension__ typedef unsigned __int128 u128;
  u128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(acc);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

}  // namespace fris
