#include "fris/throughput.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fris/codebook.hpp"
#include "fris/detection.hpp"

namespace fris {

void OverheadParams::validate() const {
  if (!(alpha_unit >= 0.0) || !(beta_codeword >= 0.0))
    throw std::invalid_argument("overhead costs must be >= 0");
  if (!(coherence_symbols > 0.0)) throw std::invalid_argument("coherence_symbols must be positive");
}

double overhead_fraction(const UnitPartition& partition, std::size_t k, const OverheadParams& params) {
  params.validate();
  const double cost = params.alpha_unit * static_cast<double>(partition.unit_count()) +
                      params.beta_codeword * static_cast<double>(k);
  return std::clamp(cost / params.coherence_symbols, 0.0, 1.0);
}

double net_throughput(std::size_t k_eff, double overhead_fraction, double p_e) {
  if (k_eff < 1) throw std::invalid_argument("net_throughput: k_eff must be >= 1");
  if (!(overhead_fraction >= 0.0 && overhead_fraction <= 1.0))
    throw std::invalid_argument("net_throughput: overhead fraction must lie in [0, 1]");
  if (!(p_e >= 0.0 && p_e <= 1.0)) throw std::invalid_argument("net_throughput: p_e must lie in [0, 1]");
  return (1.0 - overhead_fraction) * std::log2(static_cast<double>(k_eff)) * (1.0 - p_e);
}

namespace {

ThroughputReport evaluate_mode(const ApertureGrid& grid, const GranularityMode& mode, const SweepParams& params,
                               const ChannelRealization& realization, const CouplingMatrix& coupling) {
  const UnitPartition units = partition(grid, mode);
  const double spacing = params.min_unit_spacing.value_or(default_min_unit_spacing(mode));
  const CandidateSet candidates =
      enumerate_candidates(grid, units, params.n_act, params.m_samples, spacing, params.seeds.candidates);
  if (candidates.size() < 2) {
    throw InfeasibleError("candidate_count", to_string(mode) + " yields fewer than two feasible configurations");
  }

  const ResponseMap truth = build_response_map(candidates, realization, coupling, 0.0, 0);
  const double err_var = params.channel.estimation_error_var;
  const ResponseMap design =
      err_var > 0.0 ? build_response_map(candidates, realization, coupling, err_var,
                                         derive_seed(params.seeds.channel, 0xca11b))
                    : truth;
  const DistanceMatrix distances = pairwise_distances(design);
  const std::size_t k = std::min(params.k, candidates.size());
  const Codebook codebook = select_maxmin_greedy(distances, k);

  ThroughputReport report;
  report.mode = mode;
  report.unit_count = units.unit_count();
  report.k = k;
  report.k_eff = effective_size(codebook, distances, params.delta_factor * median_pairwise(distances));
  report.raw_bits = std::log2(static_cast<double>(report.k_eff));
  report.overhead_fraction = overhead_fraction(units, k, params.overhead);

  SignalModel signal;
  signal.noise_n0 = noise_for_snr(params.snr_db, mean_codeword_energy(codebook, truth), truth.antennas);
  std::vector<std::uint64_t> ber_seeds = params.seeds.ber;
  if (ber_seeds.empty()) ber_seeds.push_back(derive_seed(params.seeds.channel, 1));
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  for (auto s : ber_seeds) {
    const BerEstimate e = simulate_ber(codebook, design, truth, signal, params.trials, s);
    trials += e.trials;
    errors += e.errors;
  }
  report.p_e = BerEstimate::from_counts(trials, errors).p_hat;
  report.net_bits = net_throughput(report.k_eff, report.overhead_fraction, report.p_e);
  return report;
}

}  // namespace

std::vector<SweepEntry> granularity_sweep(const ApertureGrid& grid, const std::vector<GranularityMode>& modes,
                                          const SweepParams& params) {
  params.overhead.validate();
  if (params.trials == 0) throw std::invalid_argument("granularity_sweep: trials must be >= 1");
  ChannelParams channel = params.channel;
  channel.seed = params.seeds.channel;
  const ChannelRealization realization = draw_channel(grid, channel);
  const CouplingMatrix coupling = coupling_matrix(grid, channel.coupling_strength, channel.kernel);

  std::vector<SweepEntry> out;
  out.reserve(modes.size());
  for (const auto& mode : modes) {
    SweepEntry entry{mode, std::nullopt, {}};
    try {
      entry.report = evaluate_mode(grid, mode, params, realization, coupling);
    } catch (const InfeasibleError& e) {
      entry.error = e.what();
    } catch (const std::invalid_argument& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace fris
