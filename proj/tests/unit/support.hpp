// Shared fixtures and brute-force oracles for the unit tests.

#pragma once

#include <complex>
#include <vector>

#include "fris/channel.hpp"
#include "fris/codebook.hpp"
#include "fris/common.hpp"

namespace fris::test {

inline ResponseMap scalar_map(const std::vector<double>& xs) {
  ResponseMap map;
  map.antennas = 1;
  for (double x : xs) map.entries.push_back({{Complex{x, 0.0}}});
  return map;
}

inline ResponseMap random_map(std::size_t m, std::size_t antennas, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  ComplexGaussian g;
  ResponseMap map;
  map.antennas = antennas;
  for (std::size_t i = 0; i < m; ++i) {
    ResponseVector v;
    for (std::size_t r = 0; r < antennas; ++r) v.values.push_back(g(rng));
    map.entries.push_back(std::move(v));
  }
  return map;
}

// Plain double loop, no kernels.
inline double brute_distance(const ResponseVector& a, const ResponseVector& b) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) s += std::norm(a.values[r] - b.values[r]);
  return s;
}

// Best min-pairwise over all k-subsets by bitmask enumeration (M <= 20).
inline double brute_maxmin(const DistanceMatrix& d, std::size_t k) {
  const std::size_t m = d.size();
  double best = -1.0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    double worst = kUnboundedSpacing;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if ((mask >> i & 1u) && (mask >> j & 1u)) worst = std::min(worst, d(i, j));
    best = std::max(best, worst);
  }
  return best;
}

}  // namespace fris::test
