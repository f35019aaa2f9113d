// throughput.hpp - overhead-penalized net spatial-index throughput and the
// actuation-granularity sweep.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fris/channel.hpp"
#include "fris/geometry.hpp"

namespace fris {

struct OverheadParams {
  double alpha_unit = 1.0;        // pilot symbols per controllable unit
  double beta_codeword = 2.0;     // pilot symbols per codeword
  double coherence_symbols = 256.0;

  void validate() const;
};

struct ThroughputReport {
  GranularityMode mode;
  std::size_t unit_count = 0;
  std::size_t k = 0;
  std::size_t k_eff = 0;
  double raw_bits = 0.0;
  double overhead_fraction = 0.0;
  double p_e = 0.0;
  double net_bits = 0.0;

  double after_overhead_bits() const { return (1.0 - overhead_fraction) * raw_bits; }
};

// min(1, (alpha * units + beta * k) / T_c)
double overhead_fraction(const UnitPartition& partition, std::size_t k, const OverheadParams& params);

// (1 - overhead) * log2(k_eff) * (1 - p_e)
double net_throughput(std::size_t k_eff, double overhead_fraction, double p_e);

struct SeedSet {
  std::uint64_t channel = 0;
  std::uint64_t candidates = 0;
  std::vector<std::uint64_t> ber;  // p_e is pooled over these Monte Carlo seeds
};

struct SweepParams {
  std::size_t n_act = 16;
  std::size_t k = 8;  // capped per mode at the candidate count
  std::size_t m_samples = 512;
  std::optional<double> min_unit_spacing;  // per-mode default when unset
  ChannelParams channel;
  OverheadParams overhead;
  double snr_db = 10.0;
  std::uint64_t trials = 10000;
  double delta_factor = 0.1;  // K_eff threshold = factor * median pairwise distance
  SeedSet seeds;
};

struct SweepEntry {
  GranularityMode mode;
  std::optional<ThroughputReport> report;
  std::string error;  // set when the mode is infeasible
};

// One entry per mode, in input order; an infeasible mode yields an error
// entry and the sweep continues.
std::vector<SweepEntry> granularity_sweep(const ApertureGrid& grid, const std::vector<GranularityMode>& modes,
                                          const SweepParams& params);

}  // namespace fris
