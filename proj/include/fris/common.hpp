// common.hpp - shared numeric types, error types and seeded random streams.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fris {

using Complex = std::complex<double>;
using ConfigId = std::size_t;

// Raised when a feasibility constraint (cardinality, spacing rule) cannot be met.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(std::string constraint, const std::string& what)
      : std::runtime_error(what), constraint_(std::move(constraint)) {}
  const std::string& constraint() const { return constraint_; }

 private:
  std::string constraint_;
};

// Raised by exhaustive searches whose instance exceeds the enumeration guard.
class SearchTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Raised on file/stream failures; carries the offending path.
class IoError : public std::runtime_error {
 public:
  IoError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for substream `index` of a parent stream. Streams for distinct
// (seed, index) pairs are statistically independent for our purposes.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
class ComplexGaussian {
 public:
  explicit ComplexGaussian(double variance = 1.0) : dist_(0.0, std::sqrt(variance / 2.0)) {}
  template <class Gen>
  Complex operator()(Gen& gen) {
    const double re = dist_(gen);
    const double im = dist_(gen);
    return {re, im};
  }

 private:
  std::normal_distribution<double> dist_;
};

// Gaussian tail probability Q(x) = 0.5 erfc(x / sqrt 2).
double q_function(double x);

// sin(pi x) / (pi x), exactly zero at nonzero integers.
double normalized_sinc(double x);

// Binomial coefficient, saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Full-precision decimal rendering (17 significant digits).
std::string format_double(double v);

}  // namespace fris
