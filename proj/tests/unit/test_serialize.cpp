#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fris/serialize.hpp"
#include "fris/table.hpp"
#include "support.hpp"

using namespace fris;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "fris_unit_serialize";
  std::filesystem::create_directories(dir);
  return dir / name;
}

CandidateSet sample_candidates() {
  const ApertureGrid g = build_grid(8, 8, 0.5);
  return enumerate_candidates(g, partition(g, GranularityMode::group(2, 2)), 16, 40, 0.5, 77);
}

}  // namespace

TEST_CASE("candidate set round trip") {
  const auto c = sample_candidates();
  std::stringstream ss;
  write_candidate_set(ss, c);
  const auto back = read_candidate_set(ss);
  CHECK(back.grid == c.grid);
  CHECK(back.partition.mode == c.partition.mode);
  CHECK(back.configurations == c.configurations);
  CHECK(back.seed == c.seed);
  CHECK(back.n_act == c.n_act);
  CHECK(back.min_unit_spacing == c.min_unit_spacing);
}

TEST_CASE("response map round trip is bit exact") {
  auto map = test::random_map(17, 4, 3);
  map.provenance = {42, 0.6, CouplingKernel::sinc, 0.01, 9};
  std::stringstream ss;
  write_response_map(ss, map);
  const auto back = read_response_map(ss);
  CHECK(back.entries == map.entries);
  CHECK(back.antennas == 4);
  CHECK(back.provenance.channel_seed == 42);
  CHECK(back.provenance.rho == 0.6);
  CHECK(back.provenance.kernel == CouplingKernel::sinc);
  CHECK(back.provenance.estimation_error_var == 0.01);
  CHECK(back.provenance.calibration_seed == 9);
}

TEST_CASE("codebook round trip") {
  const auto d = pairwise_distances(test::random_map(10, 2, 5));
  const auto cb = select_maxmin_greedy(d, 4);
  std::stringstream ss;
  write_codebook(ss, cb);
  const auto back = read_codebook(ss);
  CHECK(back.members == cb.members);
  CHECK(back.method == cb.method);
  CHECK(back.d_min == cb.d_min);
  CHECK(back.seed == cb.seed);
}

TEST_CASE("files and failures") {
  const auto c = sample_candidates();
  const auto path = scratch("candidates.txt");
  save_candidate_set(path, c);
  CHECK(load_candidate_set(path).configurations == c.configurations);

  CHECK_THROWS_AS(load_codebook(scratch("missing.txt")), IoError);
  CHECK_THROWS_AS(save_codebook("/nonexistent-dir/x/codebook.txt", Codebook{}), IoError);
  {
    std::ofstream os(scratch("garbage.txt"));
    os << "fris-codebook v1\nmethod=nonsense\n";
  }
  CHECK_THROWS_AS(load_codebook(scratch("garbage.txt")), IoError);
  {
    std::ofstream os(scratch("wrong_magic.txt"));
    os << "something else\n";
  }
  CHECK_THROWS_AS(load_response_map(scratch("wrong_magic.txt")), IoError);
}

TEST_CASE("result table") {
  ResultTable t("demo", {"name", "count", "value"});
  t.set_meta("config_hash", "abc");
  t.add_row({std::string("a"), std::int64_t{3}, 0.1});
  t.add_row({std::string("b"), std::int64_t{-4}, 1e-300});
  CHECK_THROWS_AS(t.add_row({std::string("short")}), std::invalid_argument);
  CHECK(t.column("value") == 2);
  CHECK_THROWS_AS(t.column("nope"), std::out_of_range);

  std::stringstream ss;
  write_csv(ss, t);
  const std::string text = ss.str();
  CHECK(text.rfind("# schema=demo\n# config_hash=abc\nname,count,value\n", 0) == 0);
  CHECK(text.find("a,3,0.10000000000000001\n") != std::string::npos);

  const auto back = read_csv(ss);
  CHECK(back.schema() == "demo");
  CHECK(back.meta("config_hash") == "abc");
  CHECK(back.columns() == t.columns());
  REQUIRE(back.rows().size() == 2);
  CHECK(std::get<std::int64_t>(back.rows()[1][1]) == -4);
  CHECK(std::get<double>(back.rows()[0][2]) == 0.1);
  CHECK(std::get<double>(back.rows()[1][2]) == 1e-300);
  CHECK(as_number(back.rows()[0][1]) == 3.0);
  CHECK_THROWS_AS(as_number(back.rows()[0][0]), std::invalid_argument);
}

TEST_CASE("emit table creates directories and reports failures") {
  ResultTable t("demo", {"x"});
  t.add_row({1.5});
  const auto path = scratch("nested/deeper/demo.csv");
  std::filesystem::remove_all(path.parent_path());
  emit_table(t, path);
  CHECK(std::filesystem::exists(path));
  CHECK_THROWS_AS(emit_table(t, "/proc/forbidden/demo.csv"), IoError);
}
