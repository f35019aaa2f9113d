// harness.hpp - experiment orchestration: runs the design workflow
// (granularity -> candidates -> response calibration -> codebook ->
// evaluation) for every (mode, method, seed) combination and assembles
// result tables.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fris/codebook.hpp"
#include "fris/config.hpp"
#include "fris/table.hpp"
#include "fris/throughput.hpp"

namespace fris {

inline constexpr const char* kToolVersion = "0.1.0";

// Column contracts of the published tables.
const std::vector<std::string>& ber_columns();
const std::vector<std::string>& sweep_columns();
const std::vector<std::string>& scenario_a_columns();
const std::vector<std::string>& scenario_b_columns();

// Seed streams derived from one run seed.
SeedSet seed_set_for(std::uint64_t run_seed);

struct CodebookRecord {
  std::uint64_t seed = 0;
  GranularityMode mode;
  Codebook codebook;
};

struct BerRecord {
  std::uint64_t seed = 0;
  GranularityMode mode;
  SelectionMethod method{};
  std::size_t k = 0;
  double snr_db = 0.0;
  double n0 = 0.0;
  double d_min = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
};

struct StageError {
  std::string stage;
  std::string mode;
  std::string method;
  std::uint64_t seed = 0;
  std::string message;
};

struct PipelineResult {
  std::vector<CodebookRecord> codebooks;
  std::vector<BerRecord> ber;  // ordered by (mode, seed, method, snr)
  std::vector<std::pair<std::uint64_t, SweepEntry>> throughput;
  std::vector<StageError> errors;

  // Tables: "ber" (pooled over seeds), "ber_per_seed", "codebooks",
  // "throughput", "errors".
  std::vector<ResultTable> tables;
};

// Validates first (ConfigError lists every violation), then runs all stages.
// Stage failures are recorded in `errors` and the remaining combinations
// still run.
PipelineResult run_pipeline(const ExperimentConfig& config);

// Fixed-geometry baseline: one codeword per aperture quadrant, each
// activating the first n_act elements of its quadrant in row-major order.
std::vector<Configuration> quadrant_configurations(const ApertureGrid& grid, std::size_t n_act);

struct DesignArtifacts {
  CandidateSet candidates;
  ResponseMap map;  // design-time (calibrated) responses
  Codebook codebook;
};

// Codebook for the first configured mode and method at the base seed.
DesignArtifacts design_codebook(const ExperimentConfig& config);

struct ScenarioOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> seed_count;
  std::optional<std::uint64_t> trials;
};

ExperimentConfig scenario_a_config(const ScenarioOverrides& overrides = {});
ExperimentConfig scenario_b_config(const ScenarioOverrides& overrides = {});

// BER vs SNR for {fixed_ris, random, layout_maxmin, response_maxmin_greedy},
// pooled over channel seeds. Writes scenario_a.csv and scenario_a_per_seed.csv.
ResultTable reproduce_scenario_a(const std::filesystem::path& output_dir, const ScenarioOverrides& overrides = {});

// Element / Group(2,2) / Block(4,4) throughput bars for the base seed set
// (scenario_b.csv) plus one row per mode for every seed set
// (scenario_b_seeds.csv).
ResultTable reproduce_scenario_b(const std::filesystem::path& output_dir, const ScenarioOverrides& overrides = {});

// Runs the built-in oracle checks; prints one line per check and returns
// the number of failures.
int run_selftest(std::ostream& os);

}  // namespace fris
