// config.hpp - experiment configuration: flat `key=value` text with dotted
// sections. Unknown keys are errors; validation reports every violation.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fris/channel.hpp"
#include "fris/codebook.hpp"
#include "fris/geometry.hpp"
#include "fris/throughput.hpp"

namespace fris {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

struct ExperimentConfig {
  int grid_rows = 8;
  int grid_cols = 8;
  double grid_spacing = 0.5;
  std::vector<GranularityMode> modes{GranularityMode::element()};
  std::size_t n_act = 16;
  std::size_t m_samples = 512;
  std::optional<double> min_unit_spacing;  // unset: per-mode default
  ChannelParams channel;
  std::vector<SelectionMethod> methods{SelectionMethod::response_maxmin_greedy};
  std::size_t k = 8;
  std::vector<double> snr_db{10.0};  // empty: no BER stage
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  std::size_t seed_count = 1;
  OverheadParams overhead;
  double throughput_snr_db = 10.0;
  double delta_factor = 0.1;
  bool throughput = true;  // run the granularity/throughput stage
  std::string output_dir = "out";

  std::vector<std::uint64_t> seeds() const;

  // Every violation, empty when the configuration is feasible.
  std::vector<std::string> violations() const;
  // Throws ConfigError listing all violations.
  void validate() const;

  // Canonical form: every key, sorted, values at full precision.
  std::map<std::string, std::string> to_key_values() const;
  std::string to_text() const;
  // 16 hex digits, FNV-1a over the canonical form.
  std::string hash() const;
};

// Throws ConfigError (listing every bad line) on unknown keys or bad values.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

// "-5:2.5:20" (inclusive range) or "1,2,3".
std::vector<double> parse_number_list(const std::string& text);

}  // namespace fris
