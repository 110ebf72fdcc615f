// fockloss/table.hpp
//
// Experiment output: a column-named table plus a JSON metadata object,
// written as CSV with the metadata on a leading "# " line.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace fockloss {

/// Empty cell (written as `null`), number, integer or text.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

inline constexpr std::string_view kNullToken = "null";

class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
  std::size_t row_count() const noexcept { return rows_.size(); }

  /// Throws ContractViolation when the width differs from the column count.
  void add_row(std::vector<Cell> row);

  std::size_t column_index(std::string_view name) const;
  const Cell& at(std::size_t row, std::string_view column) const;
  /// Numeric value of a cell; nullopt for null or text.
  std::optional<double> number(std::size_t row, std::string_view column) const;

  nlohmann::json& metadata() noexcept { return metadata_; }
  const nlohmann::json& metadata() const noexcept { return metadata_; }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  nlohmann::json metadata_ = nlohmann::json::object();
};

/// "%.15g"; non-finite values become `null`.
std::string format_number(double value);

void write_csv(const Table& table, std::ostream& out);
std::string to_csv(const Table& table);
void write_csv_file(const Table& table, const std::filesystem::path& path);

}  // namespace fockloss
