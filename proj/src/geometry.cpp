#include "fris/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fris {

namespace {

constexpr std::size_t kExhaustiveUnitLimit = 24;
constexpr double kSpacingTolerance = 1e-9;

bool spacing_ok(const std::vector<std::size_t>& units, const UnitPartition& partition,
                double min_unit_spacing) {
  if (min_unit_spacing <= 0.0) return true;
  for (std::size_t i = 0; i < units.size(); ++i) {
    for (std::size_t j = i + 1; j < units.size(); ++j) {
      const double d = distance(partition.centroids[units[i]], partition.centroids[units[j]]);
      if (d + kSpacingTolerance < min_unit_spacing) return false;
    }
  }
  return true;
}

// Calls visit(subset) for every k-subset of {0..n-1} in lexicographic order.
template <class Visit>
void for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    visit(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<std::size_t> draw_unit_subset(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

[[noreturn]] void throw_infeasible(std::size_t k_units, const UnitPartition& partition,
                                   double min_unit_spacing) {
  std::ostringstream os;
  os << "min_unit_spacing=" << min_unit_spacing << " admits no set of " << k_units
     << " active units out of " << partition.unit_count() << " (" << to_string(partition.mode)
     << ")";
  throw InfeasibleError("min_unit_spacing", os.str());
}

}  // namespace

double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

ApertureGrid::ApertureGrid(int rows, int cols, double spacing)
    : rows_(rows), cols_(cols), spacing_(spacing) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid dimensions must be >= 1");
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw std::invalid_argument("grid spacing must be positive");
  positions_.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) positions_.push_back({c * spacing, r * spacing});
}

ApertureGrid build_grid(int rows, int cols, double spacing) { return {rows, cols, spacing}; }

std::string to_string(const GranularityMode& mode) {
  switch (mode.kind) {
    case Granularity::element:
      return "element";
    case Granularity::group:
      return "group:" + std::to_string(mode.sub_rows) + "x" + std::to_string(mode.sub_cols);
    case Granularity::block:
      return "block:" + std::to_string(mode.sub_rows) + "x" + std::to_string(mode.sub_cols);
  }
  return "?";
}

GranularityMode parse_granularity(const std::string& text) {
  if (text == "element") return GranularityMode::element();
  const auto colon = text.find(':');
  const auto x = text.find('x', colon == std::string::npos ? 0 : colon);
  if (colon == std::string::npos || x == std::string::npos)
    throw std::invalid_argument("bad granularity '" + text + "' (expected element|group:RxC|block:RxC)");
  const std::string kind = text.substr(0, colon);
  int r = 0;
  int c = 0;
  try {
    std::size_t used = 0;
    r = std::stoi(text.substr(colon + 1, x - colon - 1), &used);
    if (used != x - colon - 1) throw std::invalid_argument("");
    c = std::stoi(text.substr(x + 1), &used);
    if (used != text.size() - x - 1) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("bad granularity shape in '" + text + "'");
  }
  if (r < 1 || c < 1) throw std::invalid_argument("granularity shape must be positive: '" + text + "'");
  if (kind == "group") return GranularityMode::group(r, c);
  if (kind == "block") return GranularityMode::block(r, c);
  throw std::invalid_argument("unknown granularity kind '" + kind + "'");
}

UnitPartition partition(const ApertureGrid& grid, const GranularityMode& mode) {
  const int tr = mode.kind == Granularity::element ? 1 : mode.sub_rows;
  const int tc = mode.kind == Granularity::element ? 1 : mode.sub_cols;
  if (tr < 1 || tc < 1 || grid.rows() % tr != 0 || grid.cols() % tc != 0) {
    throw std::invalid_argument("granularity " + to_string(mode) + " does not divide a " +
                                std::to_string(grid.rows()) + "x" + std::to_string(grid.cols()) +
                                " grid");
  }
  UnitPartition out;
  out.mode = mode;
  for (int br = 0; br < grid.rows() / tr; ++br) {
    for (int bc = 0; bc < grid.cols() / tc; ++bc) {
      ElementSet unit;
      Point2 centroid;
      for (int r = br * tr; r < (br + 1) * tr; ++r) {
        for (int c = bc * tc; c < (bc + 1) * tc; ++c) {
          const auto e = grid.index(r, c);
          unit.push_back(e);
          centroid.x += grid.position(e).x;
          centroid.y += grid.position(e).y;
        }
      }
      centroid.x /= static_cast<double>(unit.size());
      centroid.y /= static_cast<double>(unit.size());
      std::sort(unit.begin(), unit.end());
      out.units.push_back(std::move(unit));
      out.centroids.push_back(centroid);
    }
  }
  return out;
}

Configuration make_configuration(const UnitPartition& partition, std::vector<std::size_t> units) {
  std::sort(units.begin(), units.end());
  if (std::adjacent_find(units.begin(), units.end()) != units.end())
    throw std::invalid_argument("duplicate unit in configuration");
  Configuration cfg;
  for (auto u : units) {
    if (u >= partition.unit_count()) throw std::invalid_argument("unit index out of range");
    const auto& els = partition.units[u];
    cfg.active_elements.insert(cfg.active_elements.end(), els.begin(), els.end());
  }
  std::sort(cfg.active_elements.begin(), cfg.active_elements.end());
  cfg.active_units = std::move(units);
  return cfg;
}

CandidateSet enumerate_candidates(const ApertureGrid& grid, const UnitPartition& partition,
                                  std::size_t n_act, std::size_t m_samples,
                                  double min_unit_spacing, std::uint64_t seed) {
  const std::size_t unit_size = partition.unit_size();
  if (unit_size == 0) throw std::invalid_argument("empty partition");
  if (n_act == 0 || n_act % unit_size != 0) {
    throw std::invalid_argument("n_act=" + std::to_string(n_act) +
                                " is not a positive multiple of the unit size " +
                                std::to_string(unit_size));
  }
  const std::size_t k_units = n_act / unit_size;
  const std::size_t n_units = partition.unit_count();
  if (k_units > n_units) {
    throw std::invalid_argument("n_act=" + std::to_string(n_act) + " needs " +
                                std::to_string(k_units) + " units but only " +
                                std::to_string(n_units) + " exist");
  }
  if (m_samples == 0) throw std::invalid_argument("m_samples must be >= 1");
  if (min_unit_spacing < 0.0) throw std::invalid_argument("min_unit_spacing must be >= 0");

  CandidateSet out{grid, partition, {}, seed, n_act, min_unit_spacing};

  bool known_feasible = false;
  if (n_units <= kExhaustiveUnitLimit) {
    // Keep at most m_samples + 1 subsets; only the count matters beyond that.
    std::vector<std::vector<std::size_t>> feasible;
    for_each_subset(n_units, k_units, [&](const std::vector<std::size_t>& s) {
      if (feasible.size() <= m_samples && spacing_ok(s, partition, min_unit_spacing))
        feasible.push_back(s);
    });
    if (feasible.empty()) throw_infeasible(k_units, partition, min_unit_spacing);
    if (feasible.size() <= m_samples) {
      for (auto& s : feasible) out.configurations.push_back(make_configuration(partition, std::move(s)));
      return out;
    }
    known_feasible = true;
  }

  // Rejection sampling. With a known feasible count > m_samples the loop
  // always terminates; otherwise it gives up after a bounded number of draws.
  Rng rng = make_rng(seed);
  std::set<std::vector<std::size_t>> seen;
  const std::size_t max_attempts = std::max<std::size_t>(100000, 1000 * m_samples);
  std::size_t attempts = 0;
  while (out.configurations.size() < m_samples && (known_feasible || attempts < max_attempts)) {
    ++attempts;
    auto s = draw_unit_subset(n_units, k_units, rng);
    if (!spacing_ok(s, partition, min_unit_spacing)) continue;
    if (!seen.insert(s).second) continue;
    out.configurations.push_back(make_configuration(partition, std::move(s)));
  }
  if (out.configurations.empty()) throw_infeasible(k_units, partition, min_unit_spacing);
  return out;
}

double min_pairwise_spacing(const Configuration& config, const UnitPartition& partition) {
  double best = kUnboundedSpacing;
  const auto& u = config.active_units;
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = i + 1; j < u.size(); ++j)
      best = std::min(best, distance(partition.centroids.at(u[i]), partition.centroids.at(u[j])));
  return best;
}

std::size_t layout_distance(const Configuration& a, const Configuration& b) {
  std::size_t common = 0;
  auto ia = a.active_elements.begin();
  auto ib = b.active_elements.begin();
  while (ia != a.active_elements.end() && ib != b.active_elements.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return a.active_elements.size() + b.active_elements.size() - 2 * common;
}

std::size_t layout_distance(const Configuration& a, const UnitPartition& pa, const Configuration& b,
                            const UnitPartition& pb) {
  if (!(pa.mode == pb.mode) || pa.unit_count() != pb.unit_count())
    throw std::invalid_argument("layout_distance: configurations use different partitions");
  return layout_distance(a, b);
}

double default_min_unit_spacing(const GranularityMode& mode) {
  return mode.kind == Granularity::element ? 0.0 : 0.5;
}

}  // namespace fris
