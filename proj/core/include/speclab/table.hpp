#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace speclab {

/// Rectangular numeric table written as CSV: comma separator, '.' decimal
/// point, LF line endings, 17 significant digits, integers without exponent.
class ResultTable {
 public:
  explicit ResultTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t rows() const noexcept { return rows_.size(); }
  const std::vector<double>& row(std::size_t i) const { return rows_.at(i); }

  /// Throws std::invalid_argument on a width mismatch or a non-finite value.
  void add_row(std::vector<double> values);

  std::string to_csv() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

/// Formats one value the way ResultTable does.
std::string format_cell(double value);

}  // namespace speclab
