#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace prwos::tools {

// Named numeric columns plus '#'-prefixed metadata lines. Values are
// written in shortest round-trip form so equal runs give equal bytes.
class OutputTable {
 public:
  explicit OutputTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const { return meta_; }

  void add_row(std::vector<double> row);
  void set(std::size_t row, std::size_t column, double value);
  // Replaces an existing key in place.
  void set_meta(const std::string& key, const std::string& value);
  const std::string* meta(const std::string& key) const;

  std::size_t column_index(const std::string& name) const;
  double at(std::size_t row, const std::string& column) const;

  void write_csv(std::ostream& os) const;
  std::string to_csv() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

}  // namespace prwos::tools
