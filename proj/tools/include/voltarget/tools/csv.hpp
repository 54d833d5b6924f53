#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace voltarget::tools {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Column-named table rendered as CSV with a leading
/// "# voltarget-csv v1 <command>" line and a header row.
struct CsvTable {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  [[nodiscard]] std::size_t column(const std::string& name) const;
  [[nodiscard]] double number(std::size_t row, const std::string& name) const;
  [[nodiscard]] std::string to_csv() const;
};

/// Shortest round-trip representation ("%.17g").
[[nodiscard]] std::string format_number(double x);

}  // namespace voltarget::tools
