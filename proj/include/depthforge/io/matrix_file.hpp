#pragma once

#include <filesystem>
#include <string_view>

#include "depthforge/matrix.hpp"

namespace depthforge::io {

enum class MatrixFormat { csv, binary };

/// "DFMX", then u64 n, u64 d and n*d doubles, all little-endian.
inline constexpr std::string_view kBinaryMagic = "DFMX";

/// Reads a matrix, detecting the binary format by its magic bytes. CSV rows
/// are observations; a first line that does not parse as numbers is taken as
/// a header. Errors name the file and the 1-based line or row.
[[nodiscard]] Matrix read_matrix(const std::filesystem::path& path);
[[nodiscard]] Dataset read_dataset(const std::filesystem::path& path);

void write_matrix(const std::filesystem::path& path, const Matrix& m, MatrixFormat format);

/// Format from the extension: ".dfmx" or ".bin" is binary, anything else CSV.
[[nodiscard]] MatrixFormat format_for(const std::filesystem::path& path);

}  // namespace depthforge::io
