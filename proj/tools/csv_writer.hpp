#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace lhvbell::experiment {

/// Shortest-safe decimal: 17 significant digits, "C" formatting. Round-trips
/// every finite double.
std::string format_number(double value);
std::string format_number(std::uint64_t value);

/// A CSV document with one header row. Cells are written verbatim, so callers
/// pass already-formatted numbers.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  /// Throws std::invalid_argument when the width differs from the header.
  void add_row(std::vector<std::string> row);

  [[nodiscard]] const std::vector<std::string>& header() const noexcept { return header_; }
  [[nodiscard]] const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

  void write(std::ostream& out) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace lhvbell::experiment
