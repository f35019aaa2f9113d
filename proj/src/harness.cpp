#include "fris/harness.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "fris/channel.hpp"
#include "fris/detection.hpp"
#include "fris/geometry.hpp"

namespace fris {

namespace {

// Substream indices under a run seed.
enum Stream : std::uint64_t {
  kChannelStream = 1,
  kCandidateStream = 2,
  kRandomCodebookStream = 3,
  kCalibrationStream = 4,
  kBerStream = 5,
  kThroughputBerStream = 6,
};

struct SeedOutput {
  std::vector<CodebookRecord> codebooks;
  std::vector<BerRecord> ber;
  std::vector<SweepEntry> throughput;
  std::vector<StageError> errors;
};

std::uint64_t ber_seed(std::uint64_t run_seed, std::size_t mode_idx, SelectionMethod method, std::size_t snr_idx) {
  const std::uint64_t base = derive_seed(run_seed, kBerStream);
  return derive_seed(derive_seed(derive_seed(base, mode_idx), static_cast<std::uint64_t>(method)), snr_idx);
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string seed_summary(const ExperimentConfig& config) {
  return std::to_string(config.seed) + "+" + std::to_string(config.seed_count);
}

void stamp(ResultTable& table, const ExperimentConfig& config) {
  table.set_meta("config_hash", config.hash());
  table.set_meta("seeds", seed_summary(config));
  table.set_meta("tool_version", kToolVersion);
}

struct ModeMaps {
  ResponseMap truth;
  ResponseMap design;
};

ModeMaps calibrate(const CandidateSet& candidates, const ChannelRealization& realization,
                   const CouplingMatrix& coupling, double error_var, std::uint64_t calibration_seed) {
  ModeMaps maps{build_response_map(candidates, realization, coupling, 0.0, 0), {}};
  maps.design = error_var > 0.0
                    ? build_response_map(candidates, realization, coupling, error_var, calibration_seed)
                    : maps.truth;
  return maps;
}

struct Selection {
  Codebook codebook;
  // Set when the method brings its own candidate set (fixed_ris).
  std::optional<std::pair<CandidateSet, ModeMaps>> maps;
};

Selection select(SelectionMethod method, const ExperimentConfig& config, const ApertureGrid& grid,
                 const CandidateSet& candidates, const ModeMaps& maps, const DistanceMatrix& distances,
                 std::optional<DistanceMatrix>& layout, const ChannelRealization& realization,
                 const CouplingMatrix& coupling, std::uint64_t calibration_seed, std::uint64_t run_seed) {
  Selection sel;
  // Same cap as the throughput sweep: a mode never offers more codewords than candidates.
  const std::size_t k = std::min(config.k, candidates.size());
  switch (method) {
    case SelectionMethod::response_maxmin_greedy:
      sel.codebook = select_maxmin_greedy(distances, k);
      break;
    case SelectionMethod::response_maxmin_exact:
      sel.codebook = select_maxmin_exact(distances, k);
      break;
    case SelectionMethod::layout_maxmin:
      if (!layout) layout = layout_distances(candidates);
      sel.codebook = select_layout_maxmin(*layout, maps.design, k);
      break;
    case SelectionMethod::random: {
      std::vector<ConfigId> ids(candidates.size());
      std::iota(ids.begin(), ids.end(), ConfigId{0});
      sel.codebook = select_random(ids, k, derive_seed(run_seed, kRandomCodebookStream), distances);
      break;
    }
    case SelectionMethod::fixed_ris: {
      CandidateSet quads{grid, candidates.partition, quadrant_configurations(grid, config.n_act), 0, config.n_act,
                         0.0};
      ModeMaps quad_maps = calibrate(quads, realization, coupling, config.channel.estimation_error_var,
                                     calibration_seed);
      Codebook& cb = sel.codebook;
      cb.members.resize(std::min(config.k, quads.size()));
      std::iota(cb.members.begin(), cb.members.end(), ConfigId{0});
      cb.method = SelectionMethod::fixed_ris;
      cb.d_min = min_pairwise(pairwise_distances(quad_maps.design), cb.members);
      sel.maps.emplace(std::move(quads), std::move(quad_maps));
      break;
    }
  }
  return sel;
}

SeedOutput run_seed(const ExperimentConfig& config, const ApertureGrid& grid, const CouplingMatrix& coupling,
                    std::uint64_t run_seed) {
  SeedOutput out;
  const SeedSet seeds = seed_set_for(run_seed);
  ChannelParams channel_params = config.channel;
  channel_params.seed = seeds.channel;
  const ChannelRealization realization = draw_channel(grid, channel_params);
  const double err_var = config.channel.estimation_error_var;
  const std::uint64_t calibration_seed = derive_seed(run_seed, kCalibrationStream);

  for (std::size_t mode_idx = 0; mode_idx < config.modes.size(); ++mode_idx) {
    const GranularityMode& mode = config.modes[mode_idx];
    const std::string mode_name = to_string(mode);
    auto fail = [&](const std::string& stage, const std::string& method, const std::exception& e) {
      out.errors.push_back({stage, mode_name, method, run_seed, e.what()});
    };

    std::optional<UnitPartition> units;
    try {
      units = partition(grid, mode);
    } catch (const std::exception& e) {
      fail("granularity", "", e);
      continue;
    }

    std::optional<CandidateSet> candidates;
    try {
      const double spacing = config.min_unit_spacing.value_or(default_min_unit_spacing(mode));
      candidates = enumerate_candidates(grid, *units, config.n_act, config.m_samples, spacing, seeds.candidates);
    } catch (const std::exception& e) {
      fail("candidates", "", e);
      continue;
    }

    const ModeMaps maps = calibrate(*candidates, realization, coupling, err_var, calibration_seed);
    const DistanceMatrix distances = pairwise_distances(maps.design);
    std::optional<DistanceMatrix> layout;

    for (const SelectionMethod method : config.methods) {
      const std::string method_name = to_string(method);
      Selection sel;
      try {
        sel = select(method, config, grid, *candidates, maps, distances, layout, realization, coupling,
                     calibration_seed, run_seed);
      } catch (const std::exception& e) {
        fail("codebook", method_name, e);
        continue;
      }
      const Codebook& codebook = sel.codebook;
      const ModeMaps* codebook_maps = sel.maps ? &sel.maps->second : &maps;
      out.codebooks.push_back({run_seed, mode, codebook});

      if (config.trials == 0) continue;
      try {
        const double energy = mean_codeword_energy(codebook, codebook_maps->truth);
        for (std::size_t snr_idx = 0; snr_idx < config.snr_db.size(); ++snr_idx) {
          const double snr = config.snr_db[snr_idx];
          SignalModel signal;
          signal.noise_n0 = noise_for_snr(snr, energy, codebook_maps->truth.antennas);
          const BerEstimate e = simulate_ber(codebook, codebook_maps->design, codebook_maps->truth, signal,
                                             config.trials, ber_seed(run_seed, mode_idx, method, snr_idx));
          out.ber.push_back({run_seed, mode, method, codebook.k(), snr, signal.noise_n0, codebook.d_min, e.trials,
                             e.errors});
        }
      } catch (const std::exception& e) {
        fail("evaluation", method_name, e);
      }
    }
  }

  if (config.throughput) {
    SweepParams params;
    params.n_act = config.n_act;
    params.k = config.k;
    params.m_samples = config.m_samples;
    params.min_unit_spacing = config.min_unit_spacing;
    params.channel = config.channel;
    params.overhead = config.overhead;
    params.snr_db = config.throughput_snr_db;
    params.trials = config.trials;
    params.delta_factor = config.delta_factor;
    params.seeds = seeds;
    try {
      out.throughput = granularity_sweep(grid, config.modes, params);
      for (const auto& entry : out.throughput)
        if (!entry.report) out.errors.push_back({"throughput", to_string(entry.mode), "", run_seed, entry.error});
    } catch (const std::exception& e) {
      out.errors.push_back({"throughput", "", "", run_seed, e.what()});
    }
  }
  return out;
}

std::vector<Cell> sweep_cells(const ThroughputReport& r) {
  return {to_string(r.mode),
          static_cast<std::int64_t>(r.unit_count),
          static_cast<std::int64_t>(r.k),
          static_cast<std::int64_t>(r.k_eff),
          r.raw_bits,
          r.overhead_fraction,
          r.p_e,
          r.net_bits};
}

std::vector<std::string> prefixed(const std::string& first, const std::vector<std::string>& rest) {
  std::vector<std::string> out{first};
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

void build_tables(const ExperimentConfig& config, PipelineResult& result) {
  ResultTable ber("ber", ber_columns());
  ResultTable per_seed("ber_per_seed", [] {
    auto c = prefixed("seed", ber_columns());
    c.push_back("d_min");
    c.push_back("n0");
    return c;
  }());
  ResultTable codebooks("codebooks", {"seed", "mode", "method", "K", "d_min", "bit_width", "members"});
  ResultTable throughput("throughput", prefixed("seed", sweep_columns()));
  ResultTable errors("errors", {"stage", "mode", "method", "seed", "message"});

  // Pool over seeds, keyed by (mode, method, snr) in configuration order.
  struct Pool {
    std::size_t k = 0;
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
  };
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Pool> pools;
  auto index_of = [](const auto& v, const auto& x) {
    return static_cast<std::size_t>(std::find(v.begin(), v.end(), x) - v.begin());
  };
  for (const auto& r : result.ber) {
    const auto key = std::make_tuple(index_of(config.modes, r.mode), index_of(config.methods, r.method),
                                     index_of(config.snr_db, r.snr_db));
    auto& p = pools[key];
    p.k = r.k;
    p.trials += r.trials;
    p.errors += r.errors;
    const BerEstimate e = BerEstimate::from_counts(r.trials, r.errors);
    per_seed.add_row({static_cast<std::int64_t>(r.seed), to_string(r.method), static_cast<std::int64_t>(r.k),
                      static_cast<std::int64_t>(config.n_act), to_string(r.mode), r.snr_db,
                      static_cast<std::int64_t>(r.trials), static_cast<std::int64_t>(r.errors), e.p_hat,
                      e.ci95_half_width, r.d_min, r.n0});
  }
  for (const auto& [key, p] : pools) {
    const auto [mode_idx, method_idx, snr_idx] = key;
    const BerEstimate e = BerEstimate::from_counts(p.trials, p.errors);
    ber.add_row({to_string(config.methods[method_idx]), static_cast<std::int64_t>(p.k),
                 static_cast<std::int64_t>(config.n_act), to_string(config.modes[mode_idx]), config.snr_db[snr_idx],
                 static_cast<std::int64_t>(p.trials), static_cast<std::int64_t>(p.errors), e.p_hat,
                 e.ci95_half_width});
  }
  for (const auto& c : result.codebooks) {
    std::string members;
    for (std::size_t i = 0; i < c.codebook.members.size(); ++i)
      members += (i ? " " : "") + std::to_string(c.codebook.members[i]);
    codebooks.add_row({static_cast<std::int64_t>(c.seed), to_string(c.mode), to_string(c.codebook.method),
                       static_cast<std::int64_t>(c.codebook.k()), c.codebook.d_min, c.codebook.bit_width(), members});
  }
  for (const auto& [seed, entry] : result.throughput) {
    if (!entry.report) continue;
    auto cells = sweep_cells(*entry.report);
    cells.insert(cells.begin(), static_cast<std::int64_t>(seed));
    throughput.add_row(std::move(cells));
  }
  for (const auto& e : result.errors)
    errors.add_row({e.stage, e.mode, e.method, static_cast<std::int64_t>(e.seed), sanitize(e.message)});

  for (ResultTable* t : {&ber, &per_seed, &codebooks, &throughput, &errors}) {
    stamp(*t, config);
    result.tables.push_back(std::move(*t));
  }
}

const ResultTable& table_named(const PipelineResult& r, const std::string& schema) {
  for (const auto& t : r.tables)
    if (t.schema() == schema) return t;
  throw std::out_of_range("pipeline produced no table '" + schema + "'");
}

void apply(ExperimentConfig& c, const ScenarioOverrides& o) {
  if (o.seed) c.seed = *o.seed;
  if (o.seed_count) c.seed_count = *o.seed_count;
  if (o.trials) c.trials = *o.trials;
}

}  // namespace

const std::vector<std::string>& ber_columns() {
  static const std::vector<std::string> c{"method", "K",      "n_act",  "mode", "snr_db",
                                          "trials", "errors", "p_hat", "ci95"};
  return c;
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> c{"mode",     "unit_count",        "K",   "K_eff",
                                          "raw_bits", "overhead_fraction", "p_e", "net_bits"};
  return c;
}

const std::vector<std::string>& scenario_a_columns() {
  static const std::vector<std::string> c = [] {
    auto v = ber_columns();
    v.push_back("d_min");
    return v;
  }();
  return c;
}

const std::vector<std::string>& scenario_b_columns() {
  static const std::vector<std::string> c = [] {
    auto v = sweep_columns();
    v.push_back("after_overhead_bits");
    return v;
  }();
  return c;
}

SeedSet seed_set_for(std::uint64_t run_seed) {
  return {derive_seed(run_seed, kChannelStream), derive_seed(run_seed, kCandidateStream),
          {derive_seed(run_seed, kThroughputBerStream)}};
}

std::vector<Configuration> quadrant_configurations(const ApertureGrid& grid, std::size_t n_act) {
  if (grid.rows() % 2 != 0 || grid.cols() % 2 != 0)
    throw std::invalid_argument("quadrant baseline needs even grid dimensions");
  const UnitPartition quads = partition(grid, GranularityMode::block(grid.rows() / 2, grid.cols() / 2));
  if (quads.unit_size() < n_act) throw std::invalid_argument("quadrants are smaller than n_act");
  std::vector<Configuration> out;
  for (const auto& q : quads.units) {
    Configuration c;
    c.active_elements.assign(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(n_act));
    c.active_units = c.active_elements;
    out.push_back(std::move(c));
  }
  return out;
}

PipelineResult run_pipeline(const ExperimentConfig& config) {
  config.validate();
  const ApertureGrid grid = build_grid(config.grid_rows, config.grid_cols, config.grid_spacing);
  const CouplingMatrix coupling = coupling_matrix(grid, config.channel.coupling_strength, config.channel.kernel);
  const auto seeds = config.seeds();

  std::vector<SeedOutput> outputs(seeds.size());
  const auto n = static_cast<std::int64_t>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      outputs[idx] = run_seed(config, grid, coupling, seeds[idx]);
    } catch (const std::exception& e) {
      outputs[idx].errors.push_back({"pipeline", "", "", seeds[idx], e.what()});
    }
  }

  PipelineResult result;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    auto& o = outputs[i];
    std::move(o.codebooks.begin(), o.codebooks.end(), std::back_inserter(result.codebooks));
    std::move(o.ber.begin(), o.ber.end(), std::back_inserter(result.ber));
    for (auto& t : o.throughput) result.throughput.emplace_back(seeds[i], std::move(t));
    std::move(o.errors.begin(), o.errors.end(), std::back_inserter(result.errors));
  }
  build_tables(config, result);
  return result;
}

DesignArtifacts design_codebook(const ExperimentConfig& config) {
  config.validate();
  const ApertureGrid grid = build_grid(config.grid_rows, config.grid_cols, config.grid_spacing);
  const CouplingMatrix coupling = coupling_matrix(grid, config.channel.coupling_strength, config.channel.kernel);
  const SeedSet seeds = seed_set_for(config.seed);
  ChannelParams channel_params = config.channel;
  channel_params.seed = seeds.channel;
  const ChannelRealization realization = draw_channel(grid, channel_params);
  const GranularityMode& mode = config.modes.front();
  const UnitPartition units = partition(grid, mode);
  const double spacing = config.min_unit_spacing.value_or(default_min_unit_spacing(mode));
  CandidateSet candidates = enumerate_candidates(grid, units, config.n_act, config.m_samples, spacing, seeds.candidates);
  const std::uint64_t calibration_seed = derive_seed(config.seed, kCalibrationStream);
  ModeMaps maps = calibrate(candidates, realization, coupling, config.channel.estimation_error_var, calibration_seed);
  std::optional<DistanceMatrix> layout;
  Selection sel = select(config.methods.front(), config, grid, candidates, maps, pairwise_distances(maps.design),
                         layout, realization, coupling, calibration_seed, config.seed);
  if (sel.maps) return {std::move(sel.maps->first), std::move(sel.maps->second.design), std::move(sel.codebook)};
  return {std::move(candidates), std::move(maps.design), std::move(sel.codebook)};
}

ExperimentConfig scenario_a_config(const ScenarioOverrides& overrides) {
  ExperimentConfig c;
  c.modes = {GranularityMode::element()};
  c.methods = {SelectionMethod::fixed_ris, SelectionMethod::random, SelectionMethod::layout_maxmin,
               SelectionMethod::response_maxmin_greedy};
  c.snr_db = parse_number_list("-5:2.5:20");
  c.trials = 10000;
  c.seed = 1;
  c.seed_count = 200;
  c.throughput = false;
  c.output_dir = "out/scenario_a";
  apply(c, overrides);
  return c;
}

ExperimentConfig scenario_b_config(const ScenarioOverrides& overrides) {
  ExperimentConfig c;
  c.modes = {GranularityMode::element(), GranularityMode::group(2, 2), GranularityMode::block(4, 4)};
  c.methods = {SelectionMethod::response_maxmin_greedy};
  c.snr_db = {};
  c.trials = 10000;
  c.seed = 1;
  c.seed_count = 50;
  c.throughput = true;
  c.output_dir = "out/scenario_b";
  apply(c, overrides);
  return c;
}

ResultTable reproduce_scenario_a(const std::filesystem::path& output_dir, const ScenarioOverrides& overrides) {
  const ExperimentConfig config = scenario_a_config(overrides);
  const PipelineResult result = run_pipeline(config);

  // Seed-averaged d_min per method.
  std::map<SelectionMethod, std::pair<double, std::size_t>> d_min;
  for (const auto& c : result.codebooks) {
    auto& acc = d_min[c.codebook.method];
    acc.first += c.codebook.d_min;
    acc.second += 1;
  }
  ResultTable table("scenario_a", scenario_a_columns());
  for (const auto& row : table_named(result, "ber").rows()) {
    auto cells = row;
    const auto method = parse_selection_method(std::get<std::string>(row[0]));
    const auto& acc = d_min[method];
    cells.push_back(acc.second ? acc.first / static_cast<double>(acc.second) : 0.0);
    table.add_row(std::move(cells));
  }
  stamp(table, config);
  table.set_meta("scenario", "A");
  emit_table(table, output_dir / "scenario_a.csv");
  emit_table(table_named(result, "ber_per_seed"), output_dir / "scenario_a_per_seed.csv");
  if (!result.errors.empty()) emit_table(table_named(result, "errors"), output_dir / "scenario_a_errors.csv");
  return table;
}

ResultTable reproduce_scenario_b(const std::filesystem::path& output_dir, const ScenarioOverrides& overrides) {
  const ExperimentConfig config = scenario_b_config(overrides);
  const PipelineResult result = run_pipeline(config);

  ResultTable bars("scenario_b", scenario_b_columns());
  ResultTable all("scenario_b_seeds", prefixed("seed", scenario_b_columns()));
  for (const auto& [seed, entry] : result.throughput) {
    if (!entry.report) continue;
    auto cells = sweep_cells(*entry.report);
    cells.push_back(entry.report->after_overhead_bits());
    if (seed == config.seed) bars.add_row(cells);
    cells.insert(cells.begin(), static_cast<std::int64_t>(seed));
    all.add_row(std::move(cells));
  }
  for (ResultTable* t : {&bars, &all}) {
    stamp(*t, config);
    t->set_meta("scenario", "B");
  }
  emit_table(bars, output_dir / "scenario_b.csv");
  emit_table(all, output_dir / "scenario_b_seeds.csv");
  if (!result.errors.empty()) emit_table(table_named(result, "errors"), output_dir / "scenario_b_errors.csv");
  return bars;
}

}  // namespace fris
