#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "fris/channel.hpp"
#include "fris/codebook.hpp"
#include "fris/detection.hpp"
#include "fris/geometry.hpp"
#include "fris/harness.hpp"
#include "fris/throughput.hpp"

namespace fris {

namespace {

ResponseMap scalar_map(const std::vector<double>& xs) {
  ResponseMap map;
  map.antennas = 1;
  for (double x : xs) map.entries.push_back({{Complex{x, 0.0}}});
  return map;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

int run_selftest(std::ostream& os) {
  struct Check {
    std::string name;
    std::function<bool()> body;
  };
  const std::vector<Check> checks{
      {"choose(16,4) group candidates",
       [] {
         const ApertureGrid g = build_grid(8, 8, 0.5);
         const auto p = partition(g, GranularityMode::group(2, 2));
         return enumerate_candidates(g, p, 16, 5000, 0.0, 1).size() == 1820;
       }},
      {"2x2 diagonal pairs under spacing 0.6",
       [] {
         const ApertureGrid g = build_grid(2, 2, 0.5);
         const auto p = partition(g, GranularityMode::element());
         const auto c = enumerate_candidates(g, p, 2, 100, 0.6, 1);
         return c.size() == 2;
       }},
      {"sinc coupling at quarter wavelength",
       [] {
         const ApertureGrid g = build_grid(1, 2, 0.25);
         const auto c = coupling_matrix(g, 0.8, CouplingKernel::sinc);
         return close(c(0, 1), 0.8 / (M_PI / 2.0), 1e-12) && close(c(0, 1), 0.5093, 5e-5);
       }},
      {"sinc coupling zero at half wavelength",
       [] {
         const ApertureGrid g = build_grid(1, 3, 0.5);
         const auto c = coupling_matrix(g, 0.6, CouplingKernel::sinc);
         return c(0, 1) == 0.0 && c(0, 2) == 0.0;
       }},
      {"greedy scalar codebook k=2",
       [] {
         const auto d = pairwise_distances(scalar_map({0, 1, 2, 5}));
         const auto cb = select_maxmin_greedy(d, 2);
         return cb.d_min == 25.0 && cb.members == std::vector<ConfigId>{0, 3};
       }},
      {"greedy and exact scalar codebook k=3",
       [] {
         const auto d = pairwise_distances(scalar_map({0, 1, 2, 5}));
         return select_maxmin_greedy(d, 3).d_min == 4.0 && select_maxmin_exact(d, 3).d_min == 4.0;
       }},
      {"effective size hand trace",
       [] {
         DistanceMatrix d(3, DistanceDomain::response);
         d.set(0, 1, 1.0);
         d.set(0, 2, 9.0);
         d.set(1, 2, 4.0);
         Codebook cb;
         cb.members = {0, 1, 2};
         return effective_size(cb, d, 2.0) == 2;
       }},
      {"Q(1)", [] { return close(pairwise_error_prob(4.0, 2.0), 0.158655253931457, 1e-12); }},
      {"overhead (16+16)/128",
       [] {
         const ApertureGrid g = build_grid(8, 8, 0.5);
         const auto p = partition(g, GranularityMode::group(2, 2));
         return close(overhead_fraction(p, 8, {1.0, 2.0, 128.0}), 0.25, 1e-15);
       }},
      {"net throughput anchors",
       [] {
         return net_throughput(4, 0.5, 0.0) == 1.0 && net_throughput(8, 0.2, 1.0) == 0.0 &&
                net_throughput(8, 1.0, 0.1) == 0.0;
       }},
      {"K=2 simulated error rate vs Q",
       [] {
         const auto map = scalar_map({0.0, 2.0});
         Codebook cb;
         cb.members = {0, 1};
         SignalModel s;
         s.noise_n0 = 2.0;
         const auto e = simulate_ber(cb, map, s, 200000, 7);
         return std::abs(e.p_hat - pairwise_error_prob(4.0, 2.0)) <= 3.0 * e.ci95_half_width;
       }},
  };

  int failures = 0;
  for (const auto& c : checks) {
    bool ok = false;
    std::string what;
    try {
      ok = c.body();
    } catch (const std::exception& e) {
      what = e.what();
    }
    os << (ok ? "ok   " : "FAIL ") << c.name << (what.empty() ? "" : " (" + what + ")") << '\n';
    if (!ok) ++failures;
  }
  os << checks.size() - static_cast<std::size_t>(failures) << '/' << checks.size() << " checks passed\n";
  return failures;
}

}  // namespace fris
