#include "fris/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fris {

namespace {

constexpr const char* kCandidateMagic = "fris-candidates v1";
constexpr const char* kResponseMagic = "fris-response-map v1";
constexpr const char* kCodebookMagic = "fris-codebook v1";

using Header = std::map<std::string, std::string>;

void expect_magic(std::istream& is, const char* magic) {
  std::string line;
  if (!std::getline(is, line) || line != magic)
    throw std::runtime_error(std::string("expected header '") + magic + "'");
}

// Reads key=value lines up to and including the `count=` line.
Header read_header(std::istream& is, const std::string& terminal_key) {
  Header h;
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("malformed header line '" + line + "'");
    const std::string key = line.substr(0, eq);
    h[key] = line.substr(eq + 1);
    if (key == terminal_key) return h;
  }
  throw std::runtime_error("truncated header (missing " + terminal_key + ")");
}

const std::string& field(const Header& h, const std::string& key) {
  auto it = h.find(key);
  if (it == h.end()) throw std::runtime_error("missing header field '" + key + "'");
  return it->second;
}

std::uint64_t as_u64(const std::string& s) { return std::stoull(s); }
double as_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

template <class Write>
void save(const std::filesystem::path& path, Write&& write) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path.string(), "cannot open for writing");
  write(os);
  os.flush();
  if (!os) throw IoError(path.string(), "write failed");
}

template <class Read>
auto load(const std::filesystem::path& path, Read&& read) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path.string(), "cannot open for reading");
  try {
    return read(is);
  } catch (const std::invalid_argument& e) {
    throw IoError(path.string(), e.what());
  } catch (const std::out_of_range& e) {
    throw IoError(path.string(), e.what());
  } catch (const IoError&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw IoError(path.string(), e.what());
  }
}

}  // namespace

void write_candidate_set(std::ostream& os, const CandidateSet& c) {
  os << kCandidateMagic << '\n'
     << "grid.rows=" << c.grid.rows() << '\n'
     << "grid.cols=" << c.grid.cols() << '\n'
     << "grid.spacing=" << format_double(c.grid.spacing()) << '\n'
     << "partition.mode=" << to_string(c.partition.mode) << '\n'
     << "seed=" << c.seed << '\n'
     << "n_act=" << c.n_act << '\n'
     << "min_unit_spacing=" << format_double(c.min_unit_spacing) << '\n'
     << "count=" << c.configurations.size() << '\n';
  for (std::size_t i = 0; i < c.configurations.size(); ++i) {
    os << i << ':';
    for (auto e : c.configurations[i].active_elements) os << ' ' << e;
    os << '\n';
  }
}

CandidateSet read_candidate_set(std::istream& is) {
  expect_magic(is, kCandidateMagic);
  const Header h = read_header(is, "count");
  ApertureGrid grid(std::stoi(field(h, "grid.rows")), std::stoi(field(h, "grid.cols")),
                    as_double(field(h, "grid.spacing")));
  UnitPartition part = partition(grid, parse_granularity(field(h, "partition.mode")));
  CandidateSet out{grid, part, {}, as_u64(field(h, "seed")), as_u64(field(h, "n_act")),
                   as_double(field(h, "min_unit_spacing"))};

  // Map each element back to its unit to recover active_units.
  std::vector<std::size_t> unit_of(grid.size());
  for (std::size_t u = 0; u < part.unit_count(); ++u)
    for (auto e : part.units[u]) unit_of[e] = u;

  const auto count = as_u64(field(h, "count"));
  std::string line;
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!std::getline(is, line)) throw std::runtime_error("truncated configuration list");
    std::istringstream ls(line);
    std::uint64_t id = 0;
    char colon = 0;
    if (!(ls >> id >> colon) || colon != ':' || id != i)
      throw std::runtime_error("bad configuration record '" + line + "'");
    std::vector<std::size_t> units;
    std::size_t e = 0;
    std::size_t n = 0;
    while (ls >> e) {
      if (e >= grid.size()) throw std::runtime_error("element index out of range");
      units.push_back(unit_of[e]);
      ++n;
    }
    std::sort(units.begin(), units.end());
    units.erase(std::unique(units.begin(), units.end()), units.end());
    Configuration cfg = make_configuration(part, units);
    if (cfg.active_elements.size() != n) throw std::runtime_error("configuration is not a union of units");
    out.configurations.push_back(std::move(cfg));
  }
  return out;
}

void write_response_map(std::ostream& os, const ResponseMap& map) {
  os << kResponseMagic << '\n'
     << "seed=" << map.provenance.channel_seed << '\n'
     << "calibration_seed=" << map.provenance.calibration_seed << '\n'
     << "rho=" << format_double(map.provenance.rho) << '\n'
     << "kernel=" << to_string(map.provenance.kernel) << '\n'
     << "estimation_error_var=" << format_double(map.provenance.estimation_error_var) << '\n'
     << "R=" << map.antennas << '\n'
     << "count=" << map.entries.size() << '\n';
  for (std::size_t i = 0; i < map.entries.size(); ++i) {
    os << i;
    for (const auto& v : map.entries[i].values) os << ' ' << format_double(v.real()) << ' ' << format_double(v.imag());
    os << '\n';
  }
}

ResponseMap read_response_map(std::istream& is) {
  expect_magic(is, kResponseMagic);
  const Header h = read_header(is, "count");
  ResponseMap map;
  map.provenance.channel_seed = as_u64(field(h, "seed"));
  map.provenance.calibration_seed = as_u64(field(h, "calibration_seed"));
  map.provenance.rho = as_double(field(h, "rho"));
  map.provenance.kernel = parse_kernel(field(h, "kernel"));
  map.provenance.estimation_error_var = as_double(field(h, "estimation_error_var"));
  map.antennas = as_u64(field(h, "R"));
  const auto count = as_u64(field(h, "count"));
  std::string line;
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!std::getline(is, line)) throw std::runtime_error("truncated response records");
    std::istringstream ls(line);
    std::uint64_t id = 0;
    if (!(ls >> id) || id != i) throw std::runtime_error("bad response record '" + line + "'");
    ResponseVector v;
    std::string re;
    std::string im;
    while (ls >> re >> im) v.values.emplace_back(as_double(re), as_double(im));
    if (v.values.size() != map.antennas) throw std::runtime_error("response record has wrong length");
    map.entries.push_back(std::move(v));
  }
  return map;
}

void write_codebook(std::ostream& os, const Codebook& cb) {
  os << kCodebookMagic << '\n'
     << "method=" << to_string(cb.method) << '\n'
     << "seed=" << cb.seed << '\n'
     << "members=";
  for (std::size_t i = 0; i < cb.members.size(); ++i) os << (i ? " " : "") << cb.members[i];
  os << '\n'
     << "d_min=" << format_double(cb.d_min) << '\n'
     << "bit_width=" << format_double(cb.bit_width()) << '\n';
}

Codebook read_codebook(std::istream& is) {
  expect_magic(is, kCodebookMagic);
  const Header h = read_header(is, "bit_width");
  Codebook cb;
  cb.method = parse_selection_method(field(h, "method"));
  cb.seed = as_u64(field(h, "seed"));
  std::istringstream ms(field(h, "members"));
  ConfigId id = 0;
  while (ms >> id) cb.members.push_back(id);
  cb.d_min = as_double(field(h, "d_min"));
  return cb;
}

void save_candidate_set(const std::filesystem::path& path, const CandidateSet& c) {
  save(path, [&](std::ostream& os) { write_candidate_set(os, c); });
}
void save_response_map(const std::filesystem::path& path, const ResponseMap& m) {
  save(path, [&](std::ostream& os) { write_response_map(os, m); });
}
void save_codebook(const std::filesystem::path& path, const Codebook& cb) {
  save(path, [&](std::ostream& os) { write_codebook(os, cb); });
}
CandidateSet load_candidate_set(const std::filesystem::path& path) {
  return load(path, [](std::istream& is) { return read_candidate_set(is); });
}
ResponseMap load_response_map(const std::filesystem::path& path) {
  return load(path, [](std::istream& is) { return read_response_map(is); });
}
Codebook load_codebook(const std::filesystem::path& path) {
  return load(path, [](std::istream& is) { return read_codebook(is); });
}

}  // namespace fris
