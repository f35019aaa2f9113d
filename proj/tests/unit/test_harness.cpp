#include <doctest.h>
#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "fris/harness.hpp"

using namespace fris;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "fris_unit_harness" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FRIS_CLI) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.modes = {GranularityMode::element(), GranularityMode::group(2, 2)};
  c.methods = {SelectionMethod::response_maxmin_greedy, SelectionMethod::random, SelectionMethod::layout_maxmin,
               SelectionMethod::fixed_ris};
  c.m_samples = 64;
  c.snr_db = {0.0, 5.0};
  c.trials = 2000;
  c.seed = 4;
  c.seed_count = 3;
  return c;
}

const ResultTable& table(const PipelineResult& r, const std::string& schema) {
  for (const auto& t : r.tables)
    if (t.schema() == schema) return t;
  FAIL("missing table " << schema);
  throw std::logic_error("unreachable");
}

std::string csv(const ResultTable& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

}  // namespace

TEST_CASE("published column contracts") {
  CHECK(ber_columns() ==
        std::vector<std::string>{"method", "K", "n_act", "mode", "snr_db", "trials", "errors", "p_hat", "ci95"});
  CHECK(sweep_columns() == std::vector<std::string>{"mode", "unit_count", "K", "K_eff", "raw_bits",
                                                    "overhead_fraction", "p_e", "net_bits"});
  CHECK(scenario_a_columns().size() == ber_columns().size() + 1);
  CHECK(scenario_a_columns().back() == "d_min");
  CHECK(scenario_b_columns().back() == "after_overhead_bits");
}

TEST_CASE("quadrant baseline") {
  const ApertureGrid g = build_grid(8, 8, 0.5);
  const auto q = quadrant_configurations(g, 16);
  REQUIRE(q.size() == 4);
  std::set<std::size_t> all;
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(q[i].n_act() == 16);
    for (auto e : q[i].active_elements) {
      const std::size_t row = e / 8, col = e % 8;
      CHECK((row / 4) * 2 + col / 4 == i);
      all.insert(e);
    }
  }
  CHECK(all.size() == 64);
  CHECK(quadrant_configurations(g, 4)[3].active_elements == ElementSet{36, 37, 38, 39});
  CHECK_THROWS_AS(quadrant_configurations(g, 17), std::invalid_argument);
  CHECK_THROWS_AS(quadrant_configurations(build_grid(7, 8, 0.5), 4), std::invalid_argument);
}

TEST_CASE("pipeline tables") {
  const auto c = small_config();
  const auto r = run_pipeline(c);
  CHECK(r.errors.empty());

  const auto& ber = table(r, "ber");
  CHECK(ber.columns() == ber_columns());
  CHECK(ber.rows().size() == 2 * 4 * 2);
  CHECK(ber.meta("config_hash") == c.hash());
  CHECK(ber.meta("tool_version") == kToolVersion);
  CHECK(ber.meta("seeds") == "4+3");
  for (const auto& row : ber.rows()) {
    CHECK(std::get<std::int64_t>(row[5]) == 3 * 2000);
    const double p = std::get<double>(row[7]);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
  CHECK(table(r, "ber_per_seed").rows().size() == 3 * 2 * 4 * 2);
  CHECK(table(r, "codebooks").rows().size() == 3 * 2 * 4);
  CHECK(table(r, "throughput").rows().size() == 3 * 2);

  for (const auto& cb : r.codebooks) {
    CHECK(cb.codebook.k() == (cb.codebook.method == SelectionMethod::fixed_ris ? 4u : 8u));
    if (cb.codebook.method == SelectionMethod::response_maxmin_greedy) {
      for (const auto& other : r.codebooks)
        if (other.seed == cb.seed && other.mode == cb.mode && other.codebook.method != SelectionMethod::fixed_ris)
          CHECK(cb.codebook.d_min >= other.codebook.d_min - 1e-9);
    }
  }
}

TEST_CASE("pipeline output does not depend on the thread count") {
  const auto c = small_config();
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = run_pipeline(c);
  omp_set_num_threads(4);
  const auto four = run_pipeline(c);
  omp_set_num_threads(saved);
  REQUIRE(one.tables.size() == four.tables.size());
  for (std::size_t i = 0; i < one.tables.size(); ++i) CHECK(csv(one.tables[i]) == csv(four.tables[i]));
}

TEST_CASE("invalid configurations fail before any compute") {
  auto c = small_config();
  c.n_act = 5;
  CHECK_THROWS_AS(run_pipeline(c), ConfigError);
}

TEST_CASE("infeasible stages are recorded and the rest still run") {
  auto c = small_config();
  // Four group centroids cannot be 3.5 apart on this aperture; a single block is unconstrained.
  c.min_unit_spacing = 3.5;
  c.modes = {GranularityMode::group(2, 2), GranularityMode::block(4, 4)};
  c.k = 4;
  c.methods = {SelectionMethod::response_maxmin_greedy};
  c.throughput = false;
  const auto r = run_pipeline(c);
  REQUIRE(!r.errors.empty());
  for (const auto& e : r.errors) {
    CHECK(e.stage == "candidates");
    CHECK(e.mode == "group:2x2");
  }
  CHECK(table(r, "ber").rows().size() == 2);
  CHECK(table(r, "errors").rows().size() == 3);
}

TEST_CASE("codebook size is capped at the candidate count") {
  auto c = small_config();
  c.modes = {GranularityMode::block(4, 4)};
  c.methods = {SelectionMethod::response_maxmin_greedy, SelectionMethod::random};
  const auto r = run_pipeline(c);
  CHECK(r.errors.empty());
  REQUIRE(r.codebooks.size() == 3 * 2);
  for (const auto& cb : r.codebooks) CHECK(cb.codebook.k() == 4);
}

TEST_CASE("calibration error keeps design and truth apart") {
  auto c = small_config();
  c.modes = {GranularityMode::element()};
  c.methods = {SelectionMethod::response_maxmin_greedy};
  c.throughput = false;
  c.snr_db = {30.0};
  const auto clean = run_pipeline(c);
  c.channel.estimation_error_var = 50.0;
  const auto noisy = run_pipeline(c);
  const auto errors = [](const PipelineResult& r) {
    std::uint64_t n = 0;
    for (const auto& b : r.ber) n += b.errors;
    return n;
  };
  CHECK(errors(noisy) > errors(clean));
}

TEST_CASE("scenario configurations") {
  const auto a = scenario_a_config();
  CHECK(a.grid_rows == 8);
  CHECK(a.grid_spacing == 0.5);
  CHECK(a.modes == std::vector<GranularityMode>{GranularityMode::element()});
  CHECK(a.m_samples == 512);
  CHECK(a.n_act == 16);
  CHECK(a.k == 8);
  CHECK(a.channel.coupling_strength == 0.6);
  CHECK(a.channel.kernel == CouplingKernel::sinc);
  CHECK(a.channel.fading == Fading::rayleigh);
  CHECK(a.channel.rx_antennas == 4);
  CHECK(a.snr_db.size() == 11);
  CHECK(a.seed_count >= 200);
  CHECK(a.trials == 10000);
  CHECK(a.methods.size() == 4);
  CHECK(a.violations().empty());

  const auto b = scenario_b_config({std::uint64_t{7}, std::size_t{2}, std::uint64_t{100}});
  CHECK(b.modes.size() == 3);
  CHECK(b.seed == 7);
  CHECK(b.seed_count == 2);
  CHECK(b.trials == 100);
  CHECK(b.throughput);
  CHECK(b.violations().empty());
}

TEST_CASE("scenario B table") {
  const auto dir = scratch("scenario_b");
  const auto t = reproduce_scenario_b(dir, {std::nullopt, std::size_t{3}, std::uint64_t{2000}});
  CHECK(t.columns() == scenario_b_columns());
  REQUIRE(t.rows().size() == 3);
  CHECK(std::get<std::string>(t.rows()[0][0]) == "element");
  CHECK(std::get<std::string>(t.rows()[1][0]) == "group:2x2");
  CHECK(std::get<std::string>(t.rows()[2][0]) == "block:4x4");
  CHECK(fs::exists(dir / "scenario_b.csv"));
  std::ifstream is(dir / "scenario_b_seeds.csv");
  CHECK(read_csv(is).rows().size() == 9);
}

TEST_CASE("cli exit codes") {
  const auto dir = scratch("cli");
  {
    std::ofstream os(dir / "bad.cfg");
    os << "grid.rows=8\nnot.a.key=1\n";
  }
  {
    std::ofstream os(dir / "infeasible.cfg");
    os << "geometry.modes=group:2x2\ncandidates.min_unit_spacing=5\n";
  }
  CHECK(run_cli("design --config " + (dir / "bad.cfg").string() + " --out " + (dir / "o").string()) == 2);
  CHECK(run_cli("design --config " + (dir / "infeasible.cfg").string() + " --out " + (dir / "o").string()) == 3);
  CHECK(run_cli("design --config " + (dir / "missing.cfg").string()) == 4);
  CHECK(run_cli("design --out /proc/forbidden") == 4);
  CHECK(run_cli("no-such-command") == 2);
  CHECK(run_cli("design --out " + (dir / "ok").string()) == 0);
  CHECK(fs::exists(dir / "ok" / "codebook.txt"));
  CHECK(fs::exists(dir / "ok" / "response_map.txt"));
  CHECK(fs::exists(dir / "ok" / "candidates.txt"));
}

TEST_CASE("cli repro-b is byte-for-byte repeatable") {
  const auto a = scratch("repro_b_1");
  const auto b = scratch("repro_b_2");
  REQUIRE(run_cli("repro-b --seed-count 4 --trials 2000 --threads 1 --out " + a.string()) == 0);
  REQUIRE(run_cli("repro-b --seed-count 4 --trials 2000 --threads 3 --out " + b.string()) == 0);
  for (const char* f : {"scenario_b.csv", "scenario_b_seeds.csv"}) {
    CAPTURE(f);
    CHECK(!slurp(a / f).empty());
    CHECK(slurp(a / f) == slurp(b / f));
  }
}
