#include "fris/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fris/kernels.hpp"

namespace fris {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_k(std::size_t k, std::size_t m) {
  if (k < 2) throw std::invalid_argument("codebook size k must be >= 2 (a single codeword carries no bits)");
  if (k > m) {
    throw std::invalid_argument("codebook size k=" + std::to_string(k) + " exceeds the " +
                                std::to_string(m) + " available candidates");
  }
}

std::vector<ConfigId> greedy_members(const DistanceMatrix& d, std::size_t k) {
  const std::size_t m = d.size();
  check_k(k, m);
  std::size_t first = 0;
  std::size_t second = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (d(i, j) > best) {
        best = d(i, j);
        first = i;
        second = j;
      }
    }
  }
  std::vector<ConfigId> members{first, second};
  std::vector<bool> chosen(m, false);
  chosen[first] = chosen[second] = true;
  std::vector<double> gap(m);
  for (std::size_t c = 0; c < m; ++c) gap[c] = std::min(d(c, first), d(c, second));

  while (members.size() < k) {
    std::size_t pick = m;
    double pick_gap = -1.0;
    for (std::size_t c = 0; c < m; ++c) {
      if (!chosen[c] && gap[c] > pick_gap) {
        pick_gap = gap[c];
        pick = c;
      }
    }
    chosen[pick] = true;
    members.push_back(pick);
    for (std::size_t c = 0; c < m; ++c) gap[c] = std::min(gap[c], d(c, pick));
  }
  return members;
}

void require_response(const DistanceMatrix& d, const char* who) {
  if (d.domain() != DistanceDomain::response)
    throw std::invalid_argument(std::string(who) + " expects a response-domain distance matrix");
}

}  // namespace

DistanceMatrix::DistanceMatrix(std::size_t m, DistanceDomain domain, std::vector<double> values)
    : m_(m), domain_(domain), values_(std::move(values)) {
  if (values_.size() != m * m) throw std::invalid_argument("distance matrix storage must be M*M");
}

std::string to_string(SelectionMethod m) {
  switch (m) {
    case SelectionMethod::response_maxmin_greedy:
      return "response_maxmin_greedy";
    case SelectionMethod::response_maxmin_exact:
      return "response_maxmin_exact";
    case SelectionMethod::layout_maxmin:
      return "layout_maxmin";
    case SelectionMethod::random:
      return "random";
    case SelectionMethod::fixed_ris:
      return "fixed_ris";
  }
  return "?";
}

SelectionMethod parse_selection_method(const std::string& text) {
  for (auto m : {SelectionMethod::response_maxmin_greedy, SelectionMethod::response_maxmin_exact,
                 SelectionMethod::layout_maxmin, SelectionMethod::random, SelectionMethod::fixed_ris}) {
    if (to_string(m) == text) return m;
  }
  throw std::invalid_argument("unknown codebook method '" + text + "'");
}

double Codebook::bit_width() const { return members.empty() ? 0.0 : std::log2(static_cast<double>(members.size())); }

double response_distance(const ResponseVector& a, const ResponseVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("response vectors differ in length");
  double acc = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) acc += std::norm(a.values[r] - b.values[r]);
  return acc;
}

DistanceMatrix pairwise_distances(const ResponseMap& map) {
  if (map.entries.empty()) throw std::invalid_argument("response map is empty");
  for (const auto& e : map.entries)
    if (e.size() != map.entries.front().size()) throw std::invalid_argument("response vectors differ in length");
  return {map.size(), DistanceDomain::response, kernels::omp::response_distances(map.entries)};
}

DistanceMatrix layout_distances(const CandidateSet& candidates) {
  return {candidates.size(), DistanceDomain::layout, kernels::omp::layout_distances(candidates.configurations)};
}

double min_pairwise(const DistanceMatrix& distances, const std::vector<ConfigId>& members) {
  double best = kInf;
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b) best = std::min(best, distances(members[a], members[b]));
  return best;
}

Codebook select_maxmin_greedy(const DistanceMatrix& distances, std::size_t k) {
  require_response(distances, "select_maxmin_greedy");
  Codebook cb;
  cb.members = greedy_members(distances, k);
  cb.method = SelectionMethod::response_maxmin_greedy;
  cb.d_min = min_pairwise(distances, cb.members);
  return cb;
}

Codebook select_maxmin_exact(const DistanceMatrix& distances, std::size_t k) {
  require_response(distances, "select_maxmin_exact");
  const std::size_t m = distances.size();
  check_k(k, m);
  if (binomial(m, k) > kExactSearchGuard) {
    throw SearchTooLarge("exact selection over C(" + std::to_string(m) + ", " + std::to_string(k) +
                         ") subsets exceeds the guard; use response_maxmin_greedy");
  }

  // Depth-first in lexicographic order; a branch is cut once its partial
  // minimum can no longer strictly beat the incumbent.
  std::vector<ConfigId> current;
  std::vector<ConfigId> best_members;
  double best = -1.0;
  auto search = [&](auto&& self, std::size_t start, double partial_min) -> void {
    if (current.size() == k) {
      if (partial_min > best) {
        best = partial_min;
        best_members = current;
      }
      return;
    }
    const std::size_t remaining = k - current.size();
    for (std::size_t c = start; c + remaining <= m; ++c) {
      double next_min = partial_min;
      for (auto s : current) next_min = std::min(next_min, distances(s, c));
      if (next_min <= best) continue;
      current.push_back(c);
      self(self, c + 1, next_min);
      current.pop_back();
    }
  };
  search(search, 0, kInf);

  Codebook cb;
  cb.members = std::move(best_members);
  cb.method = SelectionMethod::response_maxmin_exact;
  cb.d_min = min_pairwise(distances, cb.members);
  return cb;
}

Codebook select_random(const std::vector<ConfigId>& candidate_ids, std::size_t k, std::uint64_t seed,
                       const DistanceMatrix& response_distances) {
  require_response(response_distances, "select_random");
  if (k < 1 || k > candidate_ids.size()) {
    throw std::invalid_argument("codebook size k=" + std::to_string(k) + " is outside [1, " +
                                std::to_string(candidate_ids.size()) + "]");
  }
  for (auto id : candidate_ids)
    if (id >= response_distances.size()) throw std::invalid_argument("candidate id out of range");
  std::vector<ConfigId> pool = candidate_ids;
  Rng rng = make_rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  Codebook cb;
  cb.members = std::move(pool);
  cb.method = SelectionMethod::random;
  cb.seed = seed;
  cb.d_min = min_pairwise(response_distances, cb.members);
  return cb;
}

Codebook select_layout_maxmin(const DistanceMatrix& layout, const ResponseMap& response_map, std::size_t k) {
  if (layout.domain() != DistanceDomain::layout)
    throw std::invalid_argument("select_layout_maxmin expects a layout-domain distance matrix");
  if (layout.size() != response_map.size())
    throw std::invalid_argument("layout matrix and response map cover different candidate sets");
  Codebook cb;
  cb.members = greedy_members(layout, k);
  cb.method = SelectionMethod::layout_maxmin;
  double best = kInf;
  for (std::size_t a = 0; a < cb.members.size(); ++a)
    for (std::size_t b = a + 1; b < cb.members.size(); ++b)
      best = std::min(best, response_distance(response_map.at(cb.members[a]), response_map.at(cb.members[b])));
  cb.d_min = best;
  return cb;
}

std::size_t effective_size(const Codebook& codebook, const DistanceMatrix& distances, double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
  std::vector<ConfigId> kept;
  for (auto c : codebook.members) {
    const bool separated =
        std::all_of(kept.begin(), kept.end(), [&](ConfigId s) { return distances(s, c) >= delta; });
    if (separated) kept.push_back(c);
  }
  return kept.size();
}

double median_pairwise(const DistanceMatrix& distances) {
  const std::size_t m = distances.size();
  std::vector<double> upper;
  upper.reserve(m * (m - 1) / 2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) upper.push_back(distances(i, j));
  if (upper.empty()) return 0.0;
  const std::size_t mid = upper.size() / 2;
  std::nth_element(upper.begin(), upper.begin() + static_cast<std::ptrdiff_t>(mid), upper.end());
  const double hi = upper[mid];
  if (upper.size() % 2 == 1) return hi;
  const double lo = *std::max_element(upper.begin(), upper.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace fris
