// table.hpp - result tables and their CSV form.
//
// CSV layout: `# key=value` metadata lines, the column header, then rows.
// Doubles are written with 17 significant digits.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fris {

using Cell = std::variant<std::int64_t, double, std::string>;

class ResultTable {
 public:
  ResultTable(std::string schema, std::vector<std::string> columns);

  const std::string& schema() const { return schema_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const { return metadata_; }

  // Throws std::invalid_argument when the row arity differs from the schema.
  void add_row(std::vector<Cell> row);
  void set_meta(const std::string& key, const std::string& value);
  std::string meta(const std::string& key) const;

  std::size_t column(const std::string& name) const;

 private:
  std::string schema_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::pair<std::string, std::string>> metadata_;
};

std::string format_cell(const Cell& c);

void write_csv(std::ostream& os, const ResultTable& table);

// Integers and doubles come back as the same alternatives only when the
// text is unambiguous: tokens without '.', 'e', 'n' or 'i' parse as integers.
ResultTable read_csv(std::istream& is);

// Writes the table to `path`; raises IoError with the path on failure.
void emit_table(const ResultTable& table, const std::filesystem::path& path);

double as_number(const Cell& c);

}  // namespace fris
