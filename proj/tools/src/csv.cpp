#include "voltarget/tools/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace voltarget::tools {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void CsvTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("csv row width does not match header");
  rows.push_back(std::move(row));
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("no column named " + name);
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  const Cell& c = rows.at(row).at(column(name));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  throw std::invalid_argument("column " + name + " is not numeric");
}

std::string CsvTable::to_csv() const {
  std::string out = "# voltarget-csv v1 " + command + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      std::visit(
          [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              out += format_number(v);
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
              out += std::to_string(v);
            } else {
              out += v;
            }
          },
          row[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace voltarget::tools
