// kernels.hpp - data-parallel inner loops.
//
// Each kernel has a serial reference and an OpenMP implementation that
// produce identical results: random streams are split by candidate id or by
// fixed-size trial block, never by thread, so the output does not depend on
// the number of threads.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fris/channel.hpp"
#include "fris/geometry.hpp"

namespace fris::kernels {

// Trials per independent random substream in the Monte Carlo kernel.
inline constexpr std::uint64_t kTrialBlock = 4096;

struct DetectionProblem {
  std::span<const ResponseVector> truth;   // generates received samples
  std::span<const ResponseVector> design;  // matched by the detector
  Complex pilot{1.0, 0.0};
  double noise_n0 = 1.0;
};

// Index of the nearest design response to y (lowest index on ties).
// `scaled` holds pilot * h_i flattened K x R.
std::size_t nearest(std::span<const Complex> y, std::span<const Complex> scaled, std::size_t antennas);

namespace serial {

std::vector<ResponseVector> responses(const std::vector<Configuration>& configs,
                                      const ChannelRealization& realization,
                                      const CouplingMatrix& coupling, double error_var,
                                      std::uint64_t seed);

// Row-major M x M squared response distances.
std::vector<double> response_distances(std::span<const ResponseVector> responses);

std::vector<double> layout_distances(const std::vector<Configuration>& configs);

std::uint64_t count_index_errors(const DetectionProblem& problem, std::uint64_t trials,
                                 std::uint64_t seed);

}  // namespace serial

namespace omp {

std::vector<ResponseVector> responses(const std::vector<Configuration>& configs,
                                      const ChannelRealization& realization,
                                      const CouplingMatrix& coupling, double error_var,
                                      std::uint64_t seed);

std::vector<double> response_distances(std::span<const ResponseVector> responses);

std::vector<double> layout_distances(const std::vector<Configuration>& configs);

std::uint64_t count_index_errors(const DetectionProblem& problem, std::uint64_t trials,
                                 std::uint64_t seed);

}  // namespace omp

}  // namespace fris::kernels
