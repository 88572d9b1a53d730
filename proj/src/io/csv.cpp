#include "depthforge/io/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "depthforge/error.hpp"

namespace depthforge::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

std::vector<std::string> split_fields(std::string_view line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(sep, start);
    fields.emplace_back(trim(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start)));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return fields;
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  out_ << (filled_ ? "," : "") << text;
  ++filled_;
  return *this;
}

CsvWriter& CsvWriter::cell(double value) { return cell(std::string_view(format_double(value))); }

CsvWriter& CsvWriter::cell(std::size_t value) { return cell(std::string_view(std::to_string(value))); }

void CsvWriter::end_row() {
  require(filled_ == columns_, ErrorKind::invalid_argument,
          "csv row has " + std::to_string(filled_) + " cells, header has " + std::to_string(columns_));
  out_ << '\n';
  filled_ = 0;
}

CsvTable CsvTable::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::io, "cannot open " + path.string());
  CsvTable table;
  table.source_ = path.string();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (table.header_.empty()) {
      table.header_ = std::move(fields);
      continue;
    }
    require(fields.size() == table.header_.size(), ErrorKind::malformed_data,
            table.source_ + ":" + std::to_string(line_no) + ": expected " + std::to_string(table.header_.size()) +
                " fields, found " + std::to_string(fields.size()));
    table.cells_.push_back(std::move(fields));
  }
  require(!table.header_.empty(), ErrorKind::malformed_data, table.source_ + ": empty file");
  return table;
}

bool CsvTable::has_column(std::string_view name) const {
  for (const auto& h : header_)
    if (h == name) return true;
  return false;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return i;
  fail(ErrorKind::malformed_data, source_ + ": missing column '" + std::string(name) + "'");
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  double value = 0.0;
  require(parse_double(cells_[row][col], value) && std::isfinite(value), ErrorKind::malformed_data,
          source_ + ": data row " + std::to_string(row + 1) + ", column '" + header_[col] + "': '" + cells_[row][col] +
              "' is not a finite number");
  return value;
}

}  // namespace depthforge::io
