// geometry.hpp - planar aperture grid, actuation-granularity partitions and
// feasible-configuration generation.
//
// All lengths are expressed in wavelengths.

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fris/common.hpp"

namespace fris {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point2& a, const Point2& b);

class ApertureGrid {
 public:
  ApertureGrid(int rows, int cols, double spacing);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return positions_.size(); }
  const std::vector<Point2>& positions() const { return positions_; }
  const Point2& position(std::size_t element) const { return positions_.at(element); }
  std::size_t index(int row, int col) const { return static_cast<std::size_t>(row) * cols_ + col; }

  friend bool operator==(const ApertureGrid& a, const ApertureGrid& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.spacing_ == b.spacing_;
  }

 private:
  int rows_;
  int cols_;
  double spacing_;
  std::vector<Point2> positions_;
};

// Throws std::invalid_argument on non-positive dimensions or spacing.
ApertureGrid build_grid(int rows, int cols, double spacing);

enum class Granularity { element, group, block };

struct GranularityMode {
  Granularity kind = Granularity::element;
  int sub_rows = 1;
  int sub_cols = 1;

  static GranularityMode element() { return {}; }
  static GranularityMode group(int r, int c) { return {Granularity::group, r, c}; }
  static GranularityMode block(int r, int c) { return {Granularity::block, r, c}; }

  friend bool operator==(const GranularityMode&, const GranularityMode&) = default;
};

// "element", "group:2x2", "block:4x4"
std::string to_string(const GranularityMode& mode);
GranularityMode parse_granularity(const std::string& text);

using ElementSet = std::vector<std::size_t>;  // sorted ascending

struct UnitPartition {
  GranularityMode mode;
  std::vector<ElementSet> units;
  std::vector<Point2> centroids;

  std::size_t unit_count() const { return units.size(); }
  std::size_t unit_size() const { return units.empty() ? 0 : units.front().size(); }
};

// Contiguous rectangular tiles in row-major tile order. Throws
// std::invalid_argument when the sub-shape does not divide the grid.
UnitPartition partition(const ApertureGrid& grid, const GranularityMode& mode);

struct Configuration {
  std::vector<std::size_t> active_units;  // sorted
  ElementSet active_elements;             // sorted
  std::size_t n_act() const { return active_elements.size(); }

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

Configuration make_configuration(const UnitPartition& partition, std::vector<std::size_t> units);

struct CandidateSet {
  ApertureGrid grid;
  UnitPartition partition;
  std::vector<Configuration> configurations;
  std::uint64_t seed = 0;
  std::size_t n_act = 0;
  double min_unit_spacing = 0.0;

  std::size_t size() const { return configurations.size(); }
};

// Returns up to m_samples distinct feasible configurations with n_act active
// elements. Small unit counts (<= 24) are enumerated exhaustively; when the
// feasible set fits in m_samples it is returned in lexicographic unit order,
// otherwise configurations are drawn by seeded rejection sampling.
//
// Throws std::invalid_argument when n_act is incompatible with the unit size
// and InfeasibleError when the spacing rule admits no configuration.
CandidateSet enumerate_candidates(const ApertureGrid& grid, const UnitPartition& partition,
                                  std::size_t n_act, std::size_t m_samples,
                                  double min_unit_spacing, std::uint64_t seed);

inline constexpr double kUnboundedSpacing = std::numeric_limits<double>::infinity();

// Minimum centroid distance between distinct active units; kUnboundedSpacing
// when fewer than two units are active.
double min_pairwise_spacing(const Configuration& config, const UnitPartition& partition);

// Size of the symmetric difference of the active element sets.
std::size_t layout_distance(const Configuration& a, const Configuration& b);

// Checked variant: throws std::invalid_argument when the partitions differ.
std::size_t layout_distance(const Configuration& a, const UnitPartition& pa,
                            const Configuration& b, const UnitPartition& pb);

// Default spacing rule: 0.5 wavelength between unit centroids for group and
// block control, no rule for element control.
double default_min_unit_spacing(const GranularityMode& mode);

}  // namespace fris
