// detection.hpp - pilot-aided ML spatial-index detection and its error rates.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fris/channel.hpp"
#include "fris/codebook.hpp"

namespace fris {

struct SignalModel {
  Complex pilot{1.0, 0.0};
  double noise_n0 = 1.0;  // variance per complex receive dimension

  void validate() const;
};

struct ReceivedSample {
  std::vector<Complex> values;
};

struct BerEstimate {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double p_hat = 0.0;
  double ci95_half_width = 0.0;

  static BerEstimate from_counts(std::uint64_t trials, std::uint64_t errors);
  double standard_error() const { return ci95_half_width / 1.96; }
};

// argmin_i ||y - pilot h_i||^2, lowest index on ties.
std::size_t detect_index(const ReceivedSample& y, std::span<const ResponseVector> codebook_responses,
                         const SignalModel& signal);

// Monte Carlo index symbol-error rate. Transmitted samples are generated
// from `map` and detected against the same responses.
BerEstimate simulate_ber(const Codebook& codebook, const ResponseMap& map, const SignalModel& signal,
                         std::uint64_t trials, std::uint64_t seed);

// Calibration-mismatch variant: samples come from `truth`, the detector
// matches against `design`.
BerEstimate simulate_ber(const Codebook& codebook, const ResponseMap& design, const ResponseMap& truth,
                         const SignalModel& signal, std::uint64_t trials, std::uint64_t seed);

// Q(sqrt(d / (2 n0))).
double pairwise_error_prob(double d, double n0);

// (1/K) sum_i sum_{j != i} pairwise_error_prob(d_ij, n0), clipped at 1.
double union_bound(const Codebook& codebook, const ResponseMap& map, double n0);

// Mean ||pilot h_i||^2 over the codebook members.
double mean_codeword_energy(const Codebook& codebook, const ResponseMap& map, Complex pilot = {1.0, 0.0});

// n0 such that 10 log10(mean energy / (R n0)) equals snr_db.
double noise_for_snr(double snr_db, double mean_energy, std::size_t antennas);

}  // namespace fris
