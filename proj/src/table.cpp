#include "fris/table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fris/common.hpp"

namespace fris {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

Cell parse_cell(const std::string& tok) {
  if (tok.empty()) return std::string{};
  const bool numeric_start = std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '-' || tok[0] == '+';
  if (!numeric_start && tok != "inf" && tok != "nan") return tok;
  const bool floating = tok.find_first_of(".eEni") != std::string::npos;
  try {
    std::size_t used = 0;
    if (!floating) {
      const long long v = std::stoll(tok, &used);
      if (used == tok.size()) return static_cast<std::int64_t>(v);
    } else {
      const double v = std::stod(tok, &used);
      if (used == tok.size()) return v;
    }
  } catch (const std::exception&) {
  }
  return tok;
}

}  // namespace

ResultTable::ResultTable(std::string schema, std::vector<std::string> columns)
    : schema_(std::move(schema)), columns_(std::move(columns)) {}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("row arity " + std::to_string(row.size()) + " does not match schema '" +
                                schema_ + "' (" + std::to_string(columns_.size()) + " columns)");
  }
  rows_.push_back(std::move(row));
}

void ResultTable::set_meta(const std::string& key, const std::string& value) {
  for (auto& kv : metadata_) {
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  }
  metadata_.emplace_back(key, value);
}

std::string ResultTable::meta(const std::string& key) const {
  for (const auto& kv : metadata_)
    if (kv.first == key) return kv.second;
  return {};
}

std::size_t ResultTable::column(const std::string& name) const {
  auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw std::out_of_range("no column '" + name + "' in table " + schema_);
  return static_cast<std::size_t>(it - columns_.begin());
}

std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  return std::get<std::string>(c);
}

double as_number(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&c)) return *d;
  throw std::invalid_argument("cell is not numeric: '" + std::get<std::string>(c) + "'");
}

void write_csv(std::ostream& os, const ResultTable& table) {
  os << "# schema=" << table.schema() << '\n';
  for (const auto& [k, v] : table.metadata()) os << "# " << k << '=' << v << '\n';
  for (std::size_t i = 0; i < table.columns().size(); ++i) os << (i ? "," : "") << table.columns()[i];
  os << '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << '\n';
  }
}

ResultTable read_csv(std::istream& is) {
  std::string line;
  std::string schema;
  std::vector<std::pair<std::string, std::string>> meta;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) != 0) break;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(2, eq - 2);
    const std::string value = line.substr(eq + 1);
    if (key == "schema")
      schema = value;
    else
      meta.emplace_back(key, value);
  }
  if (line.empty()) throw std::runtime_error("csv has no column header");
  ResultTable table(schema, split(line, ','));
  for (const auto& [k, v] : meta) table.set_meta(k, v);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<Cell> row;
    for (const auto& tok : split(line, ',')) row.push_back(parse_cell(tok));
    table.add_row(std::move(row));
  }
  return table;
}

void emit_table(const ResultTable& table, const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path.string(), "cannot open for writing");
  write_csv(os, table);
  os.flush();
  if (!os) throw IoError(path.string(), "write failed");
}

}  // namespace fris
