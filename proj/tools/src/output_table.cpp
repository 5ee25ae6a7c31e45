#include "prwos/tools/output_table.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "prwos/tools/config.hpp"

namespace prwos::tools {

OutputTable::OutputTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("output table needs at least one column");
}

void OutputTable::add_row(std::vector<double> row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " values, table has " +
                                std::to_string(columns_.size()) + " columns");
  }
  rows_.push_back(std::move(row));
}

void OutputTable::set(std::size_t row, std::size_t column, double value) {
  rows_.at(row).at(column) = value;
}

void OutputTable::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : meta_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  meta_.emplace_back(key, value);
}

const std::string* OutputTable::meta(const std::string& key) const {
  for (const auto& [k, v] : meta_) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::size_t OutputTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  throw std::out_of_range("no column '" + name + "'");
}

double OutputTable::at(std::size_t row, const std::string& column) const {
  return rows_.at(row).at(column_index(column));
}

void OutputTable::write_csv(std::ostream& os) const {
  for (const auto& [k, v] : meta_) os << "# " << k << ": " << v << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "");
      if (std::isnan(row[i])) {
        os << "nan";
      } else {
        os << format_double(row[i]);
      }
    }
    os << "\n";
  }
}

std::string OutputTable::to_csv() const {
  std::ostringstream ss;
  write_csv(ss);
  return ss.str();
}

}  // namespace prwos::tools
