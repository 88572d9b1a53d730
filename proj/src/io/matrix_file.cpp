#include "depthforge/io/matrix_file.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "depthforge/error.hpp"
#include "depthforge/io/csv.hpp"

namespace depthforge::io {

namespace {

static_assert(std::endian::native == std::endian::little, "binary matrix files assume a little-endian host");

std::string where(const std::filesystem::path& path) { return path.string(); }

Matrix read_binary(std::ifstream& in, const std::filesystem::path& path) {
  char magic[4];
  std::uint64_t shape[2];
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(shape), sizeof shape);
  require(static_cast<bool>(in), ErrorKind::malformed_data, where(path) + ": truncated header");
  const std::uint64_t n = shape[0];
  const std::uint64_t d = shape[1];
  require(n >= 1 && d >= 1, ErrorKind::malformed_data, where(path) + ": empty shape");
  require(d <= (std::uint64_t{1} << 40) / n, ErrorKind::malformed_data, where(path) + ": shape too large");

  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::uint64_t>(in.tellg());
  const std::uint64_t expected = 4 + sizeof shape + n * d * sizeof(double);
  require(size == expected, ErrorKind::malformed_data,
          where(path) + ": header declares " + std::to_string(n) + "x" + std::to_string(d) + " (" +
              std::to_string(expected) + " bytes) but the file has " + std::to_string(size) + " bytes");
  in.seekg(static_cast<std::streamoff>(4 + sizeof shape));
  std::vector<double> values(n * d);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
  require(static_cast<bool>(in), ErrorKind::malformed_data, where(path) + ": truncated payload");
  for (std::size_t i = 0; i < values.size(); ++i) {
    require(std::isfinite(values[i]), ErrorKind::malformed_data,
            where(path) + ": row " + std::to_string(i / d + 1) + " has a non-finite entry");
  }
  return Matrix(n, d, std::move(values));
}

Matrix read_csv(std::ifstream& in, const std::filesystem::path& path) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t c = 0; c < fields.size() && numeric; ++c) numeric = parse_double(fields[c], row[c]);
    if (first) {
      first = false;
      cols = fields.size();
      if (!numeric) continue;  // header
    }
    require(numeric, ErrorKind::malformed_data, where(path) + ": line " + std::to_string(line_no) + " is not numeric");
    require(fields.size() == cols, ErrorKind::malformed_data,
            where(path) + ": line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                " fields, expected " + std::to_string(cols));
    for (double v : row)
      require(std::isfinite(v), ErrorKind::malformed_data,
              where(path) + ": line " + std::to_string(line_no) + " has a non-finite entry");
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }
  require(rows >= 1, ErrorKind::malformed_data, where(path) + ": no data rows");
  return Matrix(rows, cols, std::move(values));
}

}  // namespace

MatrixFormat format_for(const std::filesystem::path& path) {
  const auto ext = path.extension();
  return ext == ".dfmx" || ext == ".bin" ? MatrixFormat::binary : MatrixFormat::csv;
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::io, "cannot open " + where(path));
  char magic[4] = {};
  in.read(magic, 4);
  const bool binary = in.gcount() == 4 && std::memcmp(magic, kBinaryMagic.data(), 4) == 0;
  in.clear();
  in.seekg(0);
  return binary ? read_binary(in, path) : read_csv(in, path);
}

Dataset read_dataset(const std::filesystem::path& path) { return Dataset(read_matrix(path)); }

void write_matrix(const std::filesystem::path& path, const Matrix& m, MatrixFormat format) {
  std::ofstream out(path, format == MatrixFormat::binary ? std::ios::binary : std::ios::out);
  require(static_cast<bool>(out), ErrorKind::io, "cannot write " + where(path));
  if (format == MatrixFormat::binary) {
    const std::uint64_t shape[2] = {m.rows(), m.cols()};
    out.write(kBinaryMagic.data(), 4);
    out.write(reinterpret_cast<const char*>(shape), sizeof shape);
    out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.rows() * m.cols() * sizeof(double)));
  } else {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
      out << '\n';
    }
  }
  require(static_cast<bool>(out), ErrorKind::io, "failed writing " + where(path));
}

}  // namespace depthforge::io
