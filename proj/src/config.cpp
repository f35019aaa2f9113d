#include "fris/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace fris {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::uint64_t to_u64(const std::string& s) {
  if (s.empty() || s[0] == '-') throw std::invalid_argument("not an unsigned integer: '" + s + "'");
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw std::invalid_argument("not an unsigned integer: '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("not a boolean: '" + s + "'");
}

Point3 to_point(const std::string& s) {
  const auto parts = split_list(s);
  if (parts.size() != 3) throw std::invalid_argument("expected x,y,z: '" + s + "'");
  return {to_double(parts[0]), to_double(parts[1]), to_double(parts[2])};
}

std::string point_text(const Point3& p) {
  return format_double(p.x) + "," + format_double(p.y) + "," + format_double(p.z);
}

template <class T, class F>
std::string join(const std::vector<T>& v, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + f(v[i]);
  return out;
}

struct KeySpec {
  const char* name;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs = {
      {"grid.rows", [](auto& c, auto& v) { c.grid_rows = to_int(v); },
       [](auto& c) { return std::to_string(c.grid_rows); }},
      {"grid.cols", [](auto& c, auto& v) { c.grid_cols = to_int(v); },
       [](auto& c) { return std::to_string(c.grid_cols); }},
      {"grid.spacing", [](auto& c, auto& v) { c.grid_spacing = to_double(v); },
       [](auto& c) { return format_double(c.grid_spacing); }},
      {"geometry.modes",
       [](auto& c, auto& v) {
         c.modes.clear();
         for (const auto& m : split_list(v)) c.modes.push_back(parse_granularity(m));
       },
       [](auto& c) { return join(c.modes, [](const GranularityMode& m) { return to_string(m); }); }},
      {"geometry.n_act", [](auto& c, auto& v) { c.n_act = to_u64(v); },
       [](auto& c) { return std::to_string(c.n_act); }},
      {"candidates.m_samples", [](auto& c, auto& v) { c.m_samples = to_u64(v); },
       [](auto& c) { return std::to_string(c.m_samples); }},
      {"candidates.min_unit_spacing",
       [](auto& c, auto& v) {
         if (v == "auto")
           c.min_unit_spacing.reset();
         else
           c.min_unit_spacing = to_double(v);
       },
       [](auto& c) { return c.min_unit_spacing ? format_double(*c.min_unit_spacing) : std::string("auto"); }},
      {"channel.fading", [](auto& c, auto& v) { c.channel.fading = parse_fading(v); },
       [](auto& c) { return to_string(c.channel.fading); }},
      {"channel.rx_antennas", [](auto& c, auto& v) { c.channel.rx_antennas = to_int(v); },
       [](auto& c) { return std::to_string(c.channel.rx_antennas); }},
      {"channel.rho", [](auto& c, auto& v) { c.channel.coupling_strength = to_double(v); },
       [](auto& c) { return format_double(c.channel.coupling_strength); }},
      {"channel.kernel", [](auto& c, auto& v) { c.channel.kernel = parse_kernel(v); },
       [](auto& c) { return to_string(c.channel.kernel); }},
      {"channel.estimation_error_var", [](auto& c, auto& v) { c.channel.estimation_error_var = to_double(v); },
       [](auto& c) { return format_double(c.channel.estimation_error_var); }},
      {"channel.tx_position", [](auto& c, auto& v) { c.channel.tx_position = to_point(v); },
       [](auto& c) { return point_text(c.channel.tx_position); }},
      {"channel.rx_position", [](auto& c, auto& v) { c.channel.rx_position = to_point(v); },
       [](auto& c) { return point_text(c.channel.rx_position); }},
      {"channel.rx_spacing", [](auto& c, auto& v) { c.channel.rx_spacing = to_double(v); },
       [](auto& c) { return format_double(c.channel.rx_spacing); }},
      {"codebook.methods",
       [](auto& c, auto& v) {
         c.methods.clear();
         for (const auto& m : split_list(v)) c.methods.push_back(parse_selection_method(m));
       },
       [](auto& c) { return join(c.methods, [](SelectionMethod m) { return to_string(m); }); }},
      {"codebook.k", [](auto& c, auto& v) { c.k = to_u64(v); }, [](auto& c) { return std::to_string(c.k); }},
      {"ber.snr_db", [](auto& c, auto& v) { c.snr_db = parse_number_list(v); },
       [](auto& c) { return join(c.snr_db, [](double d) { return format_double(d); }); }},
      {"ber.trials", [](auto& c, auto& v) { c.trials = to_u64(v); },
       [](auto& c) { return std::to_string(c.trials); }},
      {"run.seed", [](auto& c, auto& v) { c.seed = to_u64(v); }, [](auto& c) { return std::to_string(c.seed); }},
      {"run.seed_count", [](auto& c, auto& v) { c.seed_count = to_u64(v); },
       [](auto& c) { return std::to_string(c.seed_count); }},
      {"throughput.enabled", [](auto& c, auto& v) { c.throughput = to_bool(v); },
       [](auto& c) { return std::string(c.throughput ? "true" : "false"); }},
      {"throughput.alpha_unit", [](auto& c, auto& v) { c.overhead.alpha_unit = to_double(v); },
       [](auto& c) { return format_double(c.overhead.alpha_unit); }},
      {"throughput.beta_codeword", [](auto& c, auto& v) { c.overhead.beta_codeword = to_double(v); },
       [](auto& c) { return format_double(c.overhead.beta_codeword); }},
      {"throughput.coherence_symbols", [](auto& c, auto& v) { c.overhead.coherence_symbols = to_double(v); },
       [](auto& c) { return format_double(c.overhead.coherence_symbols); }},
      {"throughput.snr_db", [](auto& c, auto& v) { c.throughput_snr_db = to_double(v); },
       [](auto& c) { return format_double(c.throughput_snr_db); }},
      {"throughput.delta_factor", [](auto& c, auto& v) { c.delta_factor = to_double(v); },
       [](auto& c) { return format_double(c.delta_factor); }},
      {"output.dir", [](auto& c, auto& v) { c.output_dir = v; }, [](auto& c) { return c.output_dir; }},
  };
  return specs;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& v : violations) msg += "\n  - " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

std::vector<double> parse_number_list(const std::string& text) {
  const std::string t = trim(text);
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::istringstream ss(t);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(trim(tok));
    if (parts.size() != 3) throw std::invalid_argument("range must be start:step:stop, got '" + t + "'");
    const double start = to_double(parts[0]);
    const double step = to_double(parts[1]);
    const double stop = to_double(parts[2]);
    if (!(step > 0.0) || stop < start) throw std::invalid_argument("empty or unbounded range '" + t + "'");
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
  for (const auto& tok : split_list(t)) out.push_back(to_double(tok));
  return out;
}

std::vector<std::uint64_t> ExperimentConfig::seeds() const {
  std::vector<std::uint64_t> out(seed_count);
  for (std::size_t i = 0; i < seed_count; ++i) out[i] = seed + i;
  return out;
}

std::vector<std::string> ExperimentConfig::violations() const {
  std::vector<std::string> v;
  if (grid_rows < 1 || grid_cols < 1) v.push_back("grid.rows and grid.cols must be >= 1");
  if (!(grid_spacing > 0.0)) v.push_back("grid.spacing must be positive");
  if (modes.empty()) v.push_back("geometry.modes must list at least one mode");
  if (n_act == 0) v.push_back("geometry.n_act must be >= 1");
  if (grid_rows >= 1 && grid_cols >= 1 && grid_spacing > 0.0) {
    const ApertureGrid grid(grid_rows, grid_cols, grid_spacing);
    if (n_act > grid.size())
      v.push_back("geometry.n_act=" + std::to_string(n_act) + " exceeds the " + std::to_string(grid.size()) +
                  " aperture elements");
    for (const auto& mode : modes) {
      try {
        const auto part = partition(grid, mode);
        if (n_act % part.unit_size() != 0)
          v.push_back("geometry.n_act=" + std::to_string(n_act) + " is not a multiple of the " + to_string(mode) +
                      " unit size " + std::to_string(part.unit_size()));
      } catch (const std::invalid_argument& e) {
        v.push_back(std::string("geometry.modes: ") + e.what());
      }
    }
    for (auto m : methods) {
      if (m == SelectionMethod::fixed_ris &&
          (grid_rows % 2 != 0 || grid_cols % 2 != 0 || grid.size() / 4 < n_act))
        v.push_back("codebook.methods: fixed_ris needs even grid dimensions and quadrants of at least n_act elements");
    }
  }
  if (m_samples == 0) v.push_back("candidates.m_samples must be >= 1");
  if (min_unit_spacing && !(*min_unit_spacing >= 0.0)) v.push_back("candidates.min_unit_spacing must be >= 0");
  if (channel.rx_antennas < 1) v.push_back("channel.rx_antennas must be >= 1");
  if (!(channel.coupling_strength >= 0.0 && channel.coupling_strength <= 1.0))
    v.push_back("channel.rho must lie in [0, 1]");
  if (!(channel.estimation_error_var >= 0.0)) v.push_back("channel.estimation_error_var must be >= 0");
  if (!(channel.rx_spacing >= 0.0)) v.push_back("channel.rx_spacing must be >= 0");
  if (methods.empty()) v.push_back("codebook.methods must list at least one method");
  if (k < 2) v.push_back("codebook.k must be >= 2");
  if (k > m_samples) v.push_back("codebook.k exceeds candidates.m_samples");
  if (seed_count == 0) v.push_back("run.seed_count must be >= 1");
  if (!(overhead.alpha_unit >= 0.0) || !(overhead.beta_codeword >= 0.0))
    v.push_back("throughput.alpha_unit and throughput.beta_codeword must be >= 0");
  if (!(overhead.coherence_symbols > 0.0)) v.push_back("throughput.coherence_symbols must be positive");
  if (!(delta_factor >= 0.0)) v.push_back("throughput.delta_factor must be >= 0");
  if (throughput && trials == 0) v.push_back("throughput.enabled requires ber.trials >= 1");
  return v;
}

void ExperimentConfig::validate() const {
  auto v = violations();
  if (!v.empty()) throw ConfigError(std::move(v));
}

std::map<std::string, std::string> ExperimentConfig::to_key_values() const {
  std::map<std::string, std::string> out;
  for (const auto& spec : key_specs()) out[spec.name] = spec.get(*this);
  return out;
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : to_key_values()) out += k + "=" + v + "\n";
  return out;
}

std::string ExperimentConfig::hash() const {
  // The output directory does not affect results, so it stays out of the hash.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [k, v] : to_key_values()) {
    if (k == "output.dir") continue;
    for (char ch : k + "=" + v + "\n") {
      h ^= static_cast<unsigned char>(ch);
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
  std::vector<std::string> errors;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) {
      errors.push_back(where + "expected key=value");
      continue;
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    const auto& specs = key_specs();
    auto it = std::find_if(specs.begin(), specs.end(), [&](const KeySpec& s) { return key == s.name; });
    if (it == specs.end()) {
      errors.push_back(where + "unknown key '" + key + "'");
      continue;
    }
    try {
      it->set(base, value);
    } catch (const std::exception& e) {
      errors.push_back(where + key + ": " + e.what());
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream is(path);
  if (!is) throw IoError(path.string(), "cannot open config");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

}  // namespace fris
