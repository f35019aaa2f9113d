// channel.hpp - cascaded per-element channels, near-field coupling and
// coupling-aware receiver responses.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fris/common.hpp"
#include "fris/geometry.hpp"

namespace fris {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

enum class Fading { rayleigh, los };
enum class CouplingKernel { sinc, exponential, none };

std::string to_string(Fading f);
std::string to_string(CouplingKernel k);
Fading parse_fading(const std::string& text);
CouplingKernel parse_kernel(const std::string& text);

struct ChannelParams {
  int rx_antennas = 4;
  Fading fading = Fading::rayleigh;
  // LoS geometry. Receive antenna r sits at rx_position + (r * rx_spacing, 0, 0).
  Point3 tx_position{0.0, 0.0, 20.0};
  Point3 rx_position{0.0, 0.0, 20.0};
  double rx_spacing = 0.5;
  double coupling_strength = 0.6;
  CouplingKernel kernel = CouplingKernel::sinc;
  double estimation_error_var = 0.0;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

// N x R cascaded gains (tx -> element m -> rx antenna r), row-major.
class ChannelRealization {
 public:
  ChannelRealization(std::size_t elements, std::size_t antennas)
      : elements_(elements), antennas_(antennas), gains_(elements * antennas) {}

  std::size_t elements() const { return elements_; }
  std::size_t antennas() const { return antennas_; }
  Complex& operator()(std::size_t m, std::size_t r) { return gains_[m * antennas_ + r]; }
  const Complex& operator()(std::size_t m, std::size_t r) const { return gains_[m * antennas_ + r]; }
  std::span<const Complex> row(std::size_t m) const {
    return {gains_.data() + m * antennas_, antennas_};
  }
  const std::vector<Complex>& data() const { return gains_; }
  std::uint64_t seed() const { return seed_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  friend bool operator==(const ChannelRealization&, const ChannelRealization&) = default;

 private:
  std::size_t elements_;
  std::size_t antennas_;
  std::vector<Complex> gains_;
  std::uint64_t seed_ = 0;
};

// Symmetric N x N leakage operator with unit diagonal.
class CouplingMatrix {
 public:
  CouplingMatrix(std::size_t n, CouplingKernel kernel, double rho)
      : n_(n), kernel_(kernel), rho_(rho), entries_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  CouplingKernel kernel() const { return kernel_; }
  double rho() const { return rho_; }
  double& operator()(std::size_t m, std::size_t n) { return entries_[m * n_ + n]; }
  double operator()(std::size_t m, std::size_t n) const { return entries_[m * n_ + n]; }

 private:
  std::size_t n_;
  CouplingKernel kernel_;
  double rho_;
  std::vector<double> entries_;
};

struct ResponseVector {
  std::vector<Complex> values;
  std::size_t size() const { return values.size(); }
  friend bool operator==(const ResponseVector&, const ResponseVector&) = default;
};

struct ResponseProvenance {
  std::uint64_t channel_seed = 0;
  double rho = 0.0;
  CouplingKernel kernel = CouplingKernel::none;
  double estimation_error_var = 0.0;
  std::uint64_t calibration_seed = 0;
};

// Responses indexed by candidate configuration id (0..M-1).
struct ResponseMap {
  std::vector<ResponseVector> entries;
  ResponseProvenance provenance;
  std::size_t antennas = 0;

  std::size_t size() const { return entries.size(); }
  const ResponseVector& at(ConfigId id) const { return entries.at(id); }
};

// Rayleigh: each entry is the product of two independent CN(0,1) hops, with
// the transmitter hop shared by all receive antennas of an element.
// LoS: unit-amplitude phase exp(-j 2 pi (d_tx,m + d_m,r)).
ChannelRealization draw_channel(const ApertureGrid& grid, const ChannelParams& params);

// sinc: rho * sinc(2 d); exponential: rho * exp(-d / 0.25); none: identity.
CouplingMatrix coupling_matrix(const ApertureGrid& grid, double rho, CouplingKernel kernel);

// h[r] = sum_m (C s)_m * cascaded(m, r) for the 0/1 activation mask s.
ResponseVector effective_response(const Configuration& config, const ChannelRealization& realization,
                                  const CouplingMatrix& coupling);
ResponseVector effective_response(std::span<const std::size_t> active_elements,
                                  const ChannelRealization& realization,
                                  const CouplingMatrix& coupling);

// Maps every candidate to its effective response, optionally perturbed by
// CN(0, estimation_error_var) calibration error drawn from a per-candidate
// stream of `seed`.
ResponseMap build_response_map(const CandidateSet& candidates, const ChannelRealization& realization,
                               const CouplingMatrix& coupling, double estimation_error_var,
                               std::uint64_t seed);

ResponseVector group_equivalent_response(const ElementSet& unit, const ChannelRealization& realization,
                                         const CouplingMatrix& coupling);

}  // namespace fris
