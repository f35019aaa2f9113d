// fris - command-line front end for codebook design, BER sweeps, the
// granularity sweep and the two reproduction scenarios.

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "fris/common.hpp"
#include "fris/config.hpp"
#include "fris/harness.hpp"
#include "fris/serialize.hpp"
#include "fris/table.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kInfeasible = 3, kIo = 4 };

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> seed_count;
  std::optional<std::uint64_t> trials;
  std::optional<int> threads;
  std::string out;
};

void add_common(CLI::App* cmd, Options& o, bool with_config) {
  if (with_config) cmd->add_option("--config", o.config_path, "key=value experiment config");
  cmd->add_option("--seed", o.seed, "base run seed");
  cmd->add_option("--seed-count", o.seed_count, "number of consecutive run seeds");
  cmd->add_option("--trials", o.trials, "Monte Carlo trials per point");
  cmd->add_option("--threads", o.threads, "OpenMP threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "output directory");
}

fris::ExperimentConfig resolve(const Options& o) {
  fris::ExperimentConfig c = o.config_path.empty() ? fris::ExperimentConfig{} : fris::load_config(o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (o.seed_count) c.seed_count = *o.seed_count;
  if (o.trials) c.trials = *o.trials;
  if (!o.out.empty()) c.output_dir = o.out;
  c.validate();
  return c;
}

fris::ScenarioOverrides overrides(const Options& o) { return {o.seed, o.seed_count, o.trials}; }

void save_config(const fris::ExperimentConfig& c, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream os(dir / "config.txt", std::ios::binary);
  if (!os) throw fris::IoError((dir / "config.txt").string(), "cannot open for writing");
  os << c.to_text();
}

void emit(const fris::PipelineResult& r, const std::filesystem::path& dir, const std::vector<std::string>& names) {
  for (const auto& t : r.tables) {
    if (std::find(names.begin(), names.end(), t.schema()) == names.end()) continue;
    if (t.schema() == "errors" && t.rows().empty()) continue;
    fris::emit_table(t, dir / (t.schema() + ".csv"));
  }
}

void report_errors(const fris::PipelineResult& r) {
  for (const auto& e : r.errors)
    std::cerr << "warning: " << e.stage << " failed (seed " << e.seed << ", mode " << e.mode
              << (e.method.empty() ? "" : ", method " + e.method) << "): " << e.message << '\n';
}

int run_design(const Options& o) {
  const auto c = resolve(o);
  const auto art = fris::design_codebook(c);
  const std::filesystem::path dir = c.output_dir;
  save_config(c, dir);
  fris::save_candidate_set(dir / "candidates.txt", art.candidates);
  fris::save_response_map(dir / "response_map.txt", art.map);
  fris::save_codebook(dir / "codebook.txt", art.codebook);
  std::cout << "K=" << art.codebook.k() << " d_min=" << fris::format_double(art.codebook.d_min) << " members:";
  for (auto id : art.codebook.members) std::cout << ' ' << id;
  std::cout << '\n';
  return kOk;
}

int run_ber(const Options& o) {
  auto c = resolve(o);
  c.throughput = false;
  const auto r = fris::run_pipeline(c);
  save_config(c, c.output_dir);
  emit(r, c.output_dir, {"ber", "ber_per_seed", "codebooks", "errors"});
  report_errors(r);
  std::cout << "wrote " << (std::filesystem::path(c.output_dir) / "ber.csv").string() << '\n';
  return kOk;
}

int run_sweep(const Options& o) {
  auto c = resolve(o);
  c.throughput = true;
  c.snr_db.clear();
  const auto r = fris::run_pipeline(c);
  save_config(c, c.output_dir);
  emit(r, c.output_dir, {"throughput", "errors"});
  report_errors(r);
  std::cout << "wrote " << (std::filesystem::path(c.output_dir) / "throughput.csv").string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Response-aware index-modulation codebook design and evaluation"};
  app.set_version_flag("--version", std::string(fris::kToolVersion));
  app.require_subcommand(1);

  Options o;
  auto* design = app.add_subcommand("design", "select a codebook and write candidates, responses and codebook");
  auto* ber = app.add_subcommand("ber", "BER-vs-SNR sweep over modes, methods and seeds");
  auto* sweep = app.add_subcommand("sweep", "granularity sweep: raw, overhead-penalized and net bits");
  auto* repro_a = app.add_subcommand("repro-a", "built-in BER comparison of codebook selectors");
  auto* repro_b = app.add_subcommand("repro-b", "built-in granularity throughput comparison");
  auto* selftest = app.add_subcommand("selftest", "run built-in oracle checks");
  for (auto* cmd : {design, ber, sweep}) add_common(cmd, o, true);
  for (auto* cmd : {repro_a, repro_b}) add_common(cmd, o, false);
  selftest->add_option("--threads", o.threads, "OpenMP threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }
  if (o.threads) omp_set_num_threads(*o.threads);

  try {
    if (*design) return run_design(o);
    if (*ber) return run_ber(o);
    if (*sweep) return run_sweep(o);
    if (*repro_a || *repro_b) {
      const std::filesystem::path dir = o.out.empty() ? (*repro_a ? "out/scenario_a" : "out/scenario_b") : o.out;
      const auto table =
          *repro_a ? fris::reproduce_scenario_a(dir, overrides(o)) : fris::reproduce_scenario_b(dir, overrides(o));
      fris::write_csv(std::cout, table);
      return kOk;
    }
    if (*selftest) return fris::run_selftest(std::cout) == 0 ? kOk : kFailure;
  } catch (const fris::ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v << '\n';
    return kConfig;
  } catch (const fris::InfeasibleError& e) {
    std::cerr << "infeasible (" << e.constraint() << "): " << e.what() << '\n';
    return kInfeasible;
  } catch (const fris::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
