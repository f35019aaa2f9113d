#include "fris/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fris/kernels.hpp"

namespace fris {

namespace {

std::vector<ResponseVector> member_responses(const Codebook& codebook, const ResponseMap& map) {
  std::vector<ResponseVector> out;
  out.reserve(codebook.members.size());
  for (auto id : codebook.members) out.push_back(map.at(id));
  return out;
}

}  // namespace

void SignalModel::validate() const {
  if (!(noise_n0 > 0.0)) throw std::invalid_argument("noise_n0 must be positive");
  if (!(std::abs(pilot) > 0.0)) throw std::invalid_argument("pilot symbol must be nonzero");
}

BerEstimate BerEstimate::from_counts(std::uint64_t trials, std::uint64_t errors) {
  BerEstimate e;
  e.trials = trials;
  e.errors = errors;
  if (trials == 0) return e;
  e.p_hat = static_cast<double>(errors) / static_cast<double>(trials);
  e.ci95_half_width = 1.96 * std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(trials));
  return e;
}

std::size_t detect_index(const ReceivedSample& y, std::span<const ResponseVector> codebook_responses,
                         const SignalModel& signal) {
  if (codebook_responses.empty()) throw std::invalid_argument("detect_index: empty codebook");
  const std::size_t antennas = y.values.size();
  std::vector<Complex> scaled;
  scaled.reserve(codebook_responses.size() * antennas);
  for (const auto& h : codebook_responses) {
    if (h.size() != antennas) throw std::invalid_argument("detect_index: response length mismatch");
    for (const auto& v : h.values) scaled.push_back(signal.pilot * v);
  }
  return kernels::nearest(y.values, scaled, antennas);
}

BerEstimate simulate_ber(const Codebook& codebook, const ResponseMap& map, const SignalModel& signal,
                         std::uint64_t trials, std::uint64_t seed) {
  return simulate_ber(codebook, map, map, signal, trials, seed);
}

BerEstimate simulate_ber(const Codebook& codebook, const ResponseMap& design, const ResponseMap& truth,
                         const SignalModel& signal, std::uint64_t trials, std::uint64_t seed) {
  signal.validate();
  if (trials == 0) throw std::invalid_argument("simulate_ber: trials must be >= 1");
  if (codebook.members.empty()) throw std::invalid_argument("simulate_ber: empty codebook");
  const auto d = member_responses(codebook, design);
  const auto t = member_responses(codebook, truth);
  const kernels::DetectionProblem problem{t, d, signal.pilot, signal.noise_n0};
  return BerEstimate::from_counts(trials, kernels::omp::count_index_errors(problem, trials, seed));
}

double pairwise_error_prob(double d, double n0) {
  if (!(d >= 0.0)) throw std::invalid_argument("pairwise_error_prob: d must be >= 0");
  if (!(n0 > 0.0)) throw std::invalid_argument("pairwise_error_prob: n0 must be positive");
  if (std::isinf(d)) return 0.0;
  return q_function(std::sqrt(d / (2.0 * n0)));
}

double union_bound(const Codebook& codebook, const ResponseMap& map, double n0) {
  const std::size_t k = codebook.members.size();
  if (k < 2) throw std::invalid_argument("union_bound: codebook needs at least two members");
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      sum += pairwise_error_prob(response_distance(map.at(codebook.members[i]), map.at(codebook.members[j])), n0);
    }
  }
  return std::min(1.0, sum / static_cast<double>(k));
}

double mean_codeword_energy(const Codebook& codebook, const ResponseMap& map, Complex pilot) {
  if (codebook.members.empty()) return 0.0;
  double acc = 0.0;
  for (auto id : codebook.members)
    for (const auto& v : map.at(id).values) acc += std::norm(pilot * v);
  return acc / static_cast<double>(codebook.members.size());
}

double noise_for_snr(double snr_db, double mean_energy, std::size_t antennas) {
  if (antennas == 0) throw std::invalid_argument("noise_for_snr: antennas must be >= 1");
  return mean_energy / (static_cast<double>(antennas) * std::pow(10.0, snr_db / 10.0));
}

}  // namespace fris
