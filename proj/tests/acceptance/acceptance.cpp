// Acceptance gate: one PASS/FAIL line per criterion. Scenario runs go through
// the fris executable so the gate exercises the shipped command line.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fris/channel.hpp"
#include "fris/codebook.hpp"
#include "fris/detection.hpp"
#include "fris/geometry.hpp"
#include "fris/table.hpp"
#include "fris/throughput.hpp"

namespace fs = std::filesystem;
using namespace fris;

namespace {

// Criterion 1
constexpr double kBerWindowLow = 1e-3;
constexpr double kBerWindowHigh = 1e-1;
constexpr double kBerGapSigmas = 3.0;
constexpr std::size_t kScenarioASeeds = 200;
// Criterion 2
constexpr int kAnalyticInstances = 20;
constexpr std::uint64_t kAnalyticTrials = 1'000'000;
constexpr double kAnalyticCiMultiple = 3.0;
// Criterion 3
constexpr int kSelectionInstances = 100;
constexpr std::size_t kSelectionMaxM = 14;
// Criterion 4
constexpr std::size_t kScenarioBSeeds = 50;
constexpr double kGroupWinShare = 0.90;
// Criterion 5
constexpr double kUncoupledRelTol = 1e-12;
constexpr double kSincZeroTol = 1e-15;
// Criterion 6
constexpr double kFormulaRelTol = 1e-12;
// Criterion 8
constexpr int kUnionInstances = 50;
constexpr std::uint64_t kUnionTrials = 100'000;
constexpr double kUnionCiMultiple = 3.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

int run(const std::string& args) {
  const std::string cmd = std::string(FRIS_CLI) + " " + args + " >/dev/null";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

ResultTable read_table(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw std::runtime_error("cannot read " + p.string());
  return read_csv(is);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Identical file lists with identical bytes.
bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  std::size_t count_b = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(b)) ++count_b;
  if (names.empty() || count_b != names.size()) {
    why = "file lists differ";
    return false;
  }
  for (const auto& n : names) {
    if (slurp(a / n) != slurp(b / n)) {
      why = n + " differs";
      return false;
    }
  }
  why = std::to_string(names.size()) + " files identical";
  return true;
}

ResponseMap gaussian_map(std::size_t m, std::size_t antennas, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  ComplexGaussian g;
  ResponseMap map;
  map.antennas = antennas;
  for (std::size_t i = 0; i < m; ++i) {
    ResponseVector v;
    for (std::size_t r = 0; r < antennas; ++r) v.values.push_back(g(rng));
    map.entries.push_back(std::move(v));
  }
  return map;
}

// ---------------------------------------------------------------------------

Outcome criterion_1(const fs::path& dir) {
  const auto t = read_table(dir / "scenario_a.csv");
  const auto c_method = t.column("method"), c_snr = t.column("snr_db"), c_p = t.column("p_hat"),
             c_ci = t.column("ci95"), c_trials = t.column("trials");
  struct Point {
    double p, se;
  };
  std::map<double, std::map<std::string, Point>> by_snr;
  std::uint64_t trials = 0;
  for (const auto& row : t.rows()) {
    by_snr[as_number(row[c_snr])][std::get<std::string>(row[c_method])] = {as_number(row[c_p]),
                                                                          as_number(row[c_ci]) / 1.96};
    trials = static_cast<std::uint64_t>(as_number(row[c_trials]));
  }
  int window = 0;
  bool ok = true;
  std::string detail;
  for (const auto& [snr, pts] : by_snr) {
    const auto& g = pts.at("response_maxmin_greedy");
    const auto& l = pts.at("layout_maxmin");
    const auto& r = pts.at("random");
    if (g.p < kBerWindowLow || g.p > kBerWindowHigh) continue;
    ++window;
    const double gap_gl = (l.p - g.p) / std::hypot(g.se, l.se);
    const double gap_lr = (r.p - l.p) / std::hypot(l.se, r.se);
    const bool here = gap_gl > kBerGapSigmas && gap_lr > kBerGapSigmas;
    ok = ok && here;
    detail += " [" + fmt(snr) + " dB: " + fmt(g.p) + " < " + fmt(l.p) + " < " + fmt(r.p) + ", gaps " +
              fmt(gap_gl, 3) + "/" + fmt(gap_lr, 3) + " sigma]";
  }
  const bool enough = trials >= kScenarioASeeds * 10000;
  return {ok && window > 0 && enough,
          std::to_string(window) + " SNR points in window, " + std::to_string(trials) + " trials/point;" + detail};
}

Outcome criterion_2() {
  int ok = 0;
  double worst = 0.0;
  for (int i = 0; i < kAnalyticInstances; ++i) {
    const auto map = gaussian_map(2, 4, derive_seed(0xa2, static_cast<std::uint64_t>(i)));
    const double d = response_distance(map.at(0), map.at(1));
    // Target error rates spread over roughly 1e-3 .. 0.3.
    const double x = 0.5 + 2.5 * static_cast<double>(i) / (kAnalyticInstances - 1);
    SignalModel s;
    s.noise_n0 = d / (2.0 * x * x);
    Codebook cb;
    cb.members = {0, 1};
    const auto e = simulate_ber(cb, map, s, kAnalyticTrials, derive_seed(0xa2b, static_cast<std::uint64_t>(i)));
    const double q = pairwise_error_prob(d, s.noise_n0);
    const double ratio = std::abs(e.p_hat - q) / e.ci95_half_width;
    worst = std::max(worst, ratio);
    if (std::abs(e.p_hat - q) <= kAnalyticCiMultiple * e.ci95_half_width) ++ok;
  }
  return {ok == kAnalyticInstances, std::to_string(ok) + "/" + std::to_string(kAnalyticInstances) +
                                        " within 3 ci95, worst |p_hat - Q| = " + fmt(worst, 3) + " ci95"};
}

struct SelectionInstance {
  CandidateSet candidates;
  ResponseMap map;
  DistanceMatrix response;
  DistanceMatrix layout;
};

// Physical instances: M sampled layouts on a 4x4 aperture under a coupled
// Rayleigh channel.
SelectionInstance selection_instance(std::size_t m, std::uint64_t seed) {
  const ApertureGrid g = build_grid(4, 4, 0.5);
  auto cands = enumerate_candidates(g, partition(g, GranularityMode::element()), 4, m, 0.0, seed);
  ChannelParams p;
  p.seed = derive_seed(seed, 1);
  const auto h = draw_channel(g, p);
  auto map = build_response_map(cands, h, coupling_matrix(g, 0.6, CouplingKernel::sinc), 0.0, 0);
  auto d = pairwise_distances(map);
  auto l = layout_distances(cands);
  return {std::move(cands), std::move(map), std::move(d), std::move(l)};
}

// Seed-averaged d_min per method from the scenario A table.
std::map<std::string, double> scenario_a_dmin(const fs::path& dir) {
  const auto t = read_table(dir / "scenario_a.csv");
  std::map<std::string, double> out;
  for (const auto& row : t.rows()) out[std::get<std::string>(row[t.column("method")])] = as_number(row[t.column("d_min")]);
  return out;
}

Outcome criterion_3(const fs::path& scenario_a_dir) {
  int a_ok = 0, b_ok = 0, c_ok = 0, c_total = 0;
  double worst_ratio = kUnboundedSpacing;
  for (int i = 0; i < kSelectionInstances; ++i) {
    const auto seed = static_cast<std::uint64_t>(i);
    const std::size_t m = 8 + static_cast<std::size_t>(i) % (kSelectionMaxM - 7);
    const auto inst = selection_instance(m, derive_seed(0xc3, seed));

    const auto ex2 = select_maxmin_exact(inst.response, 2);
    const auto gr2 = select_maxmin_greedy(inst.response, 2);
    if (gr2.d_min == ex2.d_min) ++a_ok;

    bool b_here = true;
    for (std::size_t k : {3u, 4u, 5u}) {
      const auto ex = select_maxmin_exact(inst.response, k);
      const auto gr = select_maxmin_greedy(inst.response, k);
      if (ex.d_min > 0) worst_ratio = std::min(worst_ratio, gr.d_min / ex.d_min);
      b_here = b_here && gr.d_min >= ex.d_min / 2.0;

      std::vector<ConfigId> ids(inst.map.size());
      std::iota(ids.begin(), ids.end(), ConfigId{0});
      for (const auto& other : {gr, select_layout_maxmin(inst.layout, inst.map, k),
                                select_random(ids, k, derive_seed(0xc3d, seed * 8 + k), inst.response)}) {
        ++c_total;
        if (ex.d_min >= other.d_min) ++c_ok;
      }
    }
    if (b_here) ++b_ok;
  }
  // Exact is out of reach at M=512, so the scenario ordering starts at greedy.
  const auto dmin = scenario_a_dmin(scenario_a_dir);
  const double g = dmin.at("response_maxmin_greedy"), l = dmin.at("layout_maxmin"), r = dmin.at("random");
  const bool ordered = g >= l && l >= r;
  const bool pass = a_ok == kSelectionInstances && b_ok == kSelectionInstances && c_ok == c_total && ordered;
  return {pass, "(a) " + std::to_string(a_ok) + "/" + std::to_string(kSelectionInstances) + " (b) " +
                    std::to_string(b_ok) + "/" + std::to_string(kSelectionInstances) + ", worst greedy/exact " +
                    fmt(worst_ratio, 4) + " (norm ratio " + fmt(std::sqrt(worst_ratio), 4) + ") (c) " +
                    std::to_string(c_ok) + "/" + std::to_string(c_total) + "; scenario A mean d_min greedy " +
                    fmt(g) + " >= layout " + fmt(l) + " >= random " + fmt(r) + (ordered ? "" : " VIOLATED")};
}

Outcome criterion_4(const fs::path& dir) {
  const auto t = read_table(dir / "scenario_b_seeds.csv");
  const auto c_seed = t.column("seed"), c_mode = t.column("mode"), c_raw = t.column("raw_bits"),
             c_net = t.column("net_bits");
  std::map<std::int64_t, std::map<std::string, std::pair<double, double>>> runs;
  for (const auto& row : t.rows())
    runs[std::get<std::int64_t>(row[c_seed])][std::get<std::string>(row[c_mode])] = {as_number(row[c_raw]),
                                                                                      as_number(row[c_net])};
  std::size_t complete = 0, element_raw = 0, group_net = 0;
  for (const auto& [seed, modes] : runs) {
    if (modes.size() != 3) continue;
    ++complete;
    const auto& e = modes.at("element");
    const auto& g = modes.at("group:2x2");
    const auto& b = modes.at("block:4x4");
    if (e.first >= g.first && e.first >= b.first) ++element_raw;
    if (g.second > e.second && g.second > b.second) ++group_net;
  }
  const bool pass = complete >= kScenarioBSeeds && runs.size() == complete && element_raw == complete &&
                    static_cast<double>(group_net) >= kGroupWinShare * static_cast<double>(complete);
  return {pass, std::to_string(complete) + " seed sets; element raw_bits maximal in " + std::to_string(element_raw) +
                    ", group net_bits strictly highest in " + std::to_string(group_net)};
}

Outcome criterion_5() {
  const ApertureGrid g = build_grid(8, 8, 0.5);
  ChannelParams p;
  p.seed = 0xc5;
  const auto h = draw_channel(g, p);
  const auto cands = enumerate_candidates(g, partition(g, GranularityMode::element()), 16, 512, 0.0, 0xc5);
  double worst_rel = 0.0;
  for (auto kernel : {CouplingKernel::sinc, CouplingKernel::exponential, CouplingKernel::none}) {
    const auto map = build_response_map(cands, h, coupling_matrix(g, 0.0, kernel), 0.0, 0);
    for (std::size_t i = 0; i < cands.size(); ++i)
      for (std::size_t r = 0; r < h.antennas(); ++r) {
        Complex sum{};
        for (auto m : cands.configurations[i].active_elements) sum += h(m, r);
        worst_rel = std::max(worst_rel, std::abs(map.at(i).values[r] - sum) / std::abs(sum));
      }
  }
  double worst_zero = 0.0;
  std::size_t zero_pairs = 0;
  for (double rho : {0.3, 0.6, 1.0}) {
    const auto c = coupling_matrix(g, rho, CouplingKernel::sinc);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double halves = distance(g.position(i), g.position(j)) / 0.5;
        if (i == j || std::abs(halves - std::round(halves)) > 1e-12) continue;
        ++zero_pairs;
        worst_zero = std::max(worst_zero, std::abs(c(i, j)));
      }
  }
  const bool pass = worst_rel <= kUncoupledRelTol && worst_zero <= kSincZeroTol && zero_pairs > 0;
  return {pass, "worst relative deviation " + fmt(worst_rel, 3) + ", max |C| at " + std::to_string(zero_pairs) +
                    " half-wavelength pairs " + fmt(worst_zero, 3)};
}

Outcome criterion_6() {
  double worst = 0.0;
  int points = 0;
  for (int ki = 0; ki < 10; ++ki)
    for (int oi = 0; oi < 10; ++oi)
      for (int pi = 0; pi < 10; ++pi) {
        const std::size_t k = static_cast<std::size_t>(1) << ki;  // 1 .. 512
        const double oh = oi / 9.0, pe = pi / 9.0;
        const double want = (1.0 - oh) * (std::log(static_cast<double>(k)) / std::log(2.0)) * (1.0 - pe);
        const double got = net_throughput(k, oh, pe);
        const double err = want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
        worst = std::max(worst, err);
        ++points;
      }
  const bool anchors = net_throughput(8, 0.3, 1.0) == 0.0 && net_throughput(8, 1.0, 0.3) == 0.0 &&
                       net_throughput(4, 0.5, 0.0) == 1.0;
  return {worst <= kFormulaRelTol && anchors,
          std::to_string(points) + " grid points, worst relative error " + fmt(worst, 3) +
              (anchors ? ", anchors exact" : ", anchor mismatch")};
}

Outcome criterion_7(const fs::path& a1, const fs::path& a2, const fs::path& b1, const fs::path& b2) {
  std::string wa, wb;
  const bool a = same_tree(a1, a2, wa);
  const bool b = same_tree(b1, b2, wb);
  return {a && b, "repro-a: " + wa + "; repro-b: " + wb};
}

Outcome criterion_8() {
  int ok = 0;
  double tightest = kUnboundedSpacing;
  for (int i = 0; i < kUnionInstances; ++i) {
    const auto seed = derive_seed(0xc8, static_cast<std::uint64_t>(i));
    const std::size_t k = 2 + static_cast<std::size_t>(i) % 7;
    const auto map = gaussian_map(k, 1 + static_cast<std::size_t>(i) % 4, seed);
    Codebook cb;
    cb.members.resize(k);
    std::iota(cb.members.begin(), cb.members.end(), ConfigId{0});
    SignalModel s;
    s.noise_n0 = 0.05 * std::pow(1.15, i % 25);
    const auto e = simulate_ber(cb, map, s, kUnionTrials, derive_seed(seed, 1));
    const double bound = union_bound(cb, map, s.noise_n0);
    tightest = std::min(tightest, bound - (e.p_hat - kUnionCiMultiple * e.ci95_half_width));
    if (bound >= e.p_hat - kUnionCiMultiple * e.ci95_half_width) ++ok;
  }
  return {ok == kUnionInstances, std::to_string(ok) + "/" + std::to_string(kUnionInstances) +
                                     " bounded, smallest margin " + fmt(tightest, 3)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance gate"};
  fs::path work = fs::temp_directory_path() / "fris_acceptance";
  app.add_option("--work-dir", work, "scratch directory for scenario outputs");
  CLI11_PARSE(app, argc, argv);

  fs::remove_all(work);
  const fs::path a1 = work / "repro_a_1", a2 = work / "repro_a_2", b1 = work / "repro_b_1", b2 = work / "repro_b_2";
  const int rc = run("repro-a --threads 1 --out " + a1.string()) + run("repro-a --threads 2 --out " + a2.string()) +
                 run("repro-b --threads 1 --out " + b1.string()) + run("repro-b --threads 2 --out " + b2.string());
  if (rc != 0) std::cerr << "a scenario run exited non-zero\n";

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 codebook-ordering BER", [&] { return criterion_1(a1); }},
      {"2 analytic detector validation", criterion_2},
      {"3 selection-optimality properties", [&] { return criterion_3(a1); }},
      {"4 granularity tradeoff", [&] { return criterion_4(b1); }},
      {"5 coupling degeneracy", criterion_5},
      {"6 formula identities", criterion_6},
      {"7 determinism", [&] { return criterion_7(a1, a2, b1, b2); }},
      {"8 union bound", criterion_8},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << name << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
    if (!o.pass) ++failures;
  }
  return failures == 0 && rc == 0 ? 0 : 1;
}
