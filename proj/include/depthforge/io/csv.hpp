#pragma once

#include <cstddef>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace depthforge::io {

/// Shortest text for a double that reads back to the same value (17
/// significant digits at most).
[[nodiscard]] std::string format_double(double value);

[[nodiscard]] std::vector<std::string> split_fields(std::string_view line, char sep = ',');

/// Parses a full field as a double; returns false on trailing garbage.
[[nodiscard]] bool parse_double(std::string_view text, double& out);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  CsvWriter& cell(std::string_view text);
  CsvWriter& cell(double value);
  CsvWriter& cell(std::size_t value);
  /// Terminates the current row; throws if the cell count differs from the header.
  void end_row();

 private:
  std::ostream& out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

/// A CSV file with a header line, kept as text.
class CsvTable {
 public:
  static CsvTable read(const std::filesystem::path& path);

  [[nodiscard]] std::size_t rows() const noexcept { return cells_.size(); }
  [[nodiscard]] const std::vector<std::string>& header() const noexcept { return header_; }
  /// Index of a column; throws malformed_data naming the column when absent.
  [[nodiscard]] std::size_t column(std::string_view name) const;
  [[nodiscard]] bool has_column(std::string_view name) const;
  [[nodiscard]] const std::string& text(std::size_t row, std::size_t col) const { return cells_[row][col]; }
  /// Numeric cell; throws malformed_data naming file, line and column.
  [[nodiscard]] double number(std::size_t row, std::size_t col) const;

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> cells_;
};

}  // namespace depthforge::io
