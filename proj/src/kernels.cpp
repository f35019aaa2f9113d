#include "fris/kernels.hpp"

#include <limits>
#include <stdexcept>

namespace fris::kernels {

namespace {

ResponseVector response_for(const Configuration& config, std::size_t id,
                            const ChannelRealization& realization, const CouplingMatrix& coupling,
                            double error_var, std::uint64_t seed) {
  ResponseVector h = effective_response(config, realization, coupling);
  if (error_var > 0.0) {
    Rng rng = make_rng(derive_seed(seed, id));
    ComplexGaussian perturb(error_var);
    for (auto& v : h.values) v += perturb(rng);
  }
  return h;
}

// Validated up front so that no exception escapes a parallel region.
void check_inputs(const std::vector<Configuration>& configs, const ChannelRealization& realization,
                  const CouplingMatrix& coupling) {
  if (coupling.size() != realization.elements())
    throw std::invalid_argument("coupling matrix size does not match the channel realization");
  for (const auto& c : configs)
    for (auto e : c.active_elements)
      if (e >= realization.elements()) throw std::invalid_argument("active element index out of range");
}

void check_lengths(std::span<const ResponseVector> responses) {
  for (const auto& r : responses)
    if (r.size() != responses.front().size()) throw std::invalid_argument("response vectors differ in length");
}

double squared_distance(const ResponseVector& a, const ResponseVector& b) {
  double acc = 0.0;
  for (std::size_t r = 0; r < a.values.size(); ++r) acc += std::norm(a.values[r] - b.values[r]);
  return acc;
}

std::vector<Complex> flatten_scaled(std::span<const ResponseVector> h, Complex pilot, std::size_t antennas) {
  std::vector<Complex> out;
  out.reserve(h.size() * antennas);
  for (const auto& v : h) {
    if (v.values.size() != antennas) throw std::invalid_argument("inconsistent response lengths");
    for (const auto& x : v.values) out.push_back(pilot * x);
  }
  return out;
}

struct PreparedProblem {
  std::vector<Complex> truth;
  std::vector<Complex> design;
  std::size_t k = 0;
  std::size_t antennas = 0;
  double n0 = 1.0;
};

PreparedProblem prepare(const DetectionProblem& p) {
  if (p.design.empty()) throw std::invalid_argument("empty codebook");
  if (p.truth.size() != p.design.size())
    throw std::invalid_argument("truth and design codebooks differ in size");
  const std::size_t antennas = p.design.front().size();
  return {flatten_scaled(p.truth, p.pilot, antennas), flatten_scaled(p.design, p.pilot, antennas),
          p.design.size(), antennas, p.noise_n0};
}

std::uint64_t run_block(const PreparedProblem& p, std::uint64_t block, std::uint64_t count,
                        std::uint64_t seed) {
  Rng rng = make_rng(derive_seed(seed, block));
  std::uniform_int_distribution<std::size_t> pick(0, p.k - 1);
  ComplexGaussian noise(p.n0);
  std::vector<Complex> y(p.antennas);
  std::uint64_t errors = 0;
  for (std::uint64_t t = 0; t < count; ++t) {
    const std::size_t sent = pick(rng);
    const Complex* h = p.truth.data() + sent * p.antennas;
    for (std::size_t r = 0; r < p.antennas; ++r) y[r] = h[r] + noise(rng);
    if (nearest(y, p.design, p.antennas) != sent) ++errors;
  }
  return errors;
}

std::uint64_t block_count(std::uint64_t trials) { return (trials + kTrialBlock - 1) / kTrialBlock; }

std::uint64_t block_size(std::uint64_t trials, std::uint64_t b) {
  return std::min(kTrialBlock, trials - b * kTrialBlock);
}

}  // namespace

std::size_t nearest(std::span<const Complex> y, std::span<const Complex> scaled, std::size_t antennas) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  const std::size_t k = scaled.size() / antennas;
  for (std::size_t i = 0; i < k; ++i) {
    double d = 0.0;
    const Complex* h = scaled.data() + i * antennas;
    for (std::size_t r = 0; r < antennas; ++r) d += std::norm(y[r] - h[r]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

namespace serial {

std::vector<ResponseVector> responses(const std::vector<Configuration>& configs,
                                      const ChannelRealization& realization,
                                      const CouplingMatrix& coupling, double error_var,
                                      std::uint64_t seed) {
  check_inputs(configs, realization, coupling);
  std::vector<ResponseVector> out(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i)
    out[i] = response_for(configs[i], i, realization, coupling, error_var, seed);
  return out;
}

std::vector<double> response_distances(std::span<const ResponseVector> responses) {
  check_lengths(responses);
  const std::size_t m = responses.size();
  std::vector<double> d(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = squared_distance(responses[i], responses[j]);
      d[i * m + j] = v;
      d[j * m + i] = v;
    }
  }
  return d;
}

std::vector<double> layout_distances(const std::vector<Configuration>& configs) {
  const std::size_t m = configs.size();
  std::vector<double> d(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const auto v = static_cast<double>(layout_distance(configs[i], configs[j]));
      d[i * m + j] = v;
      d[j * m + i] = v;
    }
  }
  return d;
}

std::uint64_t count_index_errors(const DetectionProblem& problem, std::uint64_t trials,
                                 std::uint64_t seed) {
  const PreparedProblem p = prepare(problem);
  std::uint64_t errors = 0;
  for (std::uint64_t b = 0; b < block_count(trials); ++b)
    errors += run_block(p, b, block_size(trials, b), seed);
  return errors;
}

}  // namespace serial

namespace omp {

std::vector<ResponseVector> responses(const std::vector<Configuration>& configs,
                                      const ChannelRealization& realization,
                                      const CouplingMatrix& coupling, double error_var,
                                      std::uint64_t seed) {
  check_inputs(configs, realization, coupling);
  const auto m = static_cast<std::int64_t>(configs.size());
  std::vector<ResponseVector> out(configs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < m; ++i) {
    const auto id = static_cast<std::size_t>(i);
    out[id] = response_for(configs[id], id, realization, coupling, error_var, seed);
  }
  return out;
}

std::vector<double> response_distances(std::span<const ResponseVector> responses) {
  check_lengths(responses);
  const std::size_t m = responses.size();
  std::vector<double> d(m * m, 0.0);
  const auto rows = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = squared_distance(responses[i], responses[j]);
      d[i * m + j] = v;
      d[j * m + i] = v;
    }
  }
  return d;
}

std::vector<double> layout_distances(const std::vector<Configuration>& configs) {
  const std::size_t m = configs.size();
  std::vector<double> d(m * m, 0.0);
  const auto rows = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = i + 1; j < m; ++j) {
      const auto v = static_cast<double>(layout_distance(configs[i], configs[j]));
      d[i * m + j] = v;
      d[j * m + i] = v;
    }
  }
  return d;
}

std::uint64_t count_index_errors(const DetectionProblem& problem, std::uint64_t trials,
                                 std::uint64_t seed) {
  const PreparedProblem p = prepare(problem);
  const auto blocks = static_cast<std::int64_t>(block_count(trials));
  std::uint64_t errors = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : errors)
  for (std::int64_t b = 0; b < blocks; ++b) {
    const auto block = static_cast<std::uint64_t>(b);
    errors += run_block(p, block, block_size(trials, block), seed);
  }
  return errors;
}

}  // namespace omp

}  // namespace fris::kernels
