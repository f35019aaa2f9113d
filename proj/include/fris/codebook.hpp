// codebook.hpp - response-domain distances and max-min codebook selection.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fris/channel.hpp"
#include "fris/geometry.hpp"

namespace fris {

enum class DistanceDomain { response, layout };

// Dense symmetric M x M matrix with zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix(std::size_t m, DistanceDomain domain) : m_(m), domain_(domain), values_(m * m, 0.0) {}
  DistanceMatrix(std::size_t m, DistanceDomain domain, std::vector<double> values);

  std::size_t size() const { return m_; }
  DistanceDomain domain() const { return domain_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * m_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    values_[i * m_ + j] = v;
    values_[j * m_ + i] = v;
  }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t m_;
  DistanceDomain domain_;
  std::vector<double> values_;
};

enum class SelectionMethod { response_maxmin_greedy, response_maxmin_exact, layout_maxmin, random, fixed_ris };

std::string to_string(SelectionMethod m);
SelectionMethod parse_selection_method(const std::string& text);

struct Codebook {
  std::vector<ConfigId> members;
  SelectionMethod method = SelectionMethod::response_maxmin_greedy;
  std::uint64_t seed = 0;
  double d_min = 0.0;  // response domain
  std::size_t k() const { return members.size(); }
  double bit_width() const;
};

// Squared Euclidean norm of a - b. Throws std::invalid_argument on length mismatch.
double response_distance(const ResponseVector& a, const ResponseVector& b);

DistanceMatrix pairwise_distances(const ResponseMap& map);

DistanceMatrix layout_distances(const CandidateSet& candidates);

// Minimum pairwise entry over `members` (+inf for fewer than two members).
double min_pairwise(const DistanceMatrix& distances, const std::vector<ConfigId>& members);

// Farthest-point selection seeded by the globally farthest pair. Ties go to
// the lowest candidate id (lexicographic for the initial pair).
Codebook select_maxmin_greedy(const DistanceMatrix& distances, std::size_t k);

inline constexpr std::uint64_t kExactSearchGuard = 10'000'000;

// Exhaustive max-min search; the lexicographically smallest optimal member
// list wins ties. Throws SearchTooLarge when C(M, k) exceeds the guard.
Codebook select_maxmin_exact(const DistanceMatrix& distances, std::size_t k);

// Uniform k-subset of candidate_ids. d_min comes from response_distances.
Codebook select_random(const std::vector<ConfigId>& candidate_ids, std::size_t k, std::uint64_t seed,
                       const DistanceMatrix& response_distances);

// Greedy max-min on the layout metric; the reported d_min is measured in the
// response domain.
Codebook select_layout_maxmin(const DistanceMatrix& layout, const ResponseMap& response_map, std::size_t k);

// Prefix pruning: keep a member iff its distance to every kept member is >= delta.
std::size_t effective_size(const Codebook& codebook, const DistanceMatrix& distances, double delta);

// Median of the off-diagonal entries (upper triangle).
double median_pairwise(const DistanceMatrix& distances);

}  // namespace fris
