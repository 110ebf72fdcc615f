// src/table.cpp

#include "fockloss/table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fockloss/error.hpp"

namespace fockloss {

namespace {

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return std::string(kNullToken); }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return quote_if_needed(v); }
  };
  return std::visit(Visitor{}, cell);
}

}  // namespace

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw ContractViolation("Table: at least one column required");
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw ContractViolation("Table::add_row: expected " + std::to_string(columns_.size()) + " cells, got " +
                            std::to_string(row.size()));
  }
  rows_.push_back(std::move(row));
}

std::size_t Table::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i] == name) return i;
  throw ContractViolation("Table: no column named " + std::string(name));
}

const Cell& Table::at(std::size_t row, std::string_view column) const { return rows_.at(row)[column_index(column)]; }

std::optional<double> Table::number(std::size_t row, std::string_view column) const {
  const Cell& c = at(row, column);
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  return std::nullopt;
}

std::string format_number(double value) {
  if (!std::isfinite(value)) return std::string(kNullToken);
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return buf;
}

void write_csv(const Table& table, std::ostream& out) {
  out << "# " << table.metadata().dump() << '\n';
  for (std::size_t i = 0; i < table.columns().size(); ++i) out << (i ? "," : "") << quote_if_needed(table.columns()[i]);
  out << '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << render(row[i]);
    out << '\n';
  }
}

std::string to_csv(const Table& table) {
  std::ostringstream s;
  write_csv(table, s);
  return s.str();
}

void write_csv_file(const Table& table, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file " + path.string());
  write_csv(table, f);
  if (!f) throw ConfigError("failed writing " + path.string());
}

}  // namespace fockloss
