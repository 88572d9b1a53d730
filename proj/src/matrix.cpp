#include "depthforge/matrix.hpp"

#include <cmath>
#include <string>

#include "depthforge/error.hpp"

namespace depthforge {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require(data_.size() == rows_ * cols_, ErrorKind::dimension_mismatch,
          "matrix payload has " + std::to_string(data_.size()) + " entries, expected " +
              std::to_string(rows_ * cols_));
}

Dataset::Dataset(Matrix points) : points_(std::move(points)) {
  require(points_.rows() >= 1 && points_.cols() >= 1, ErrorKind::invalid_argument,
          "dataset needs at least one observation and one dimension");
  for (std::size_t i = 0; i < points_.rows(); ++i) {
    for (double v : points_.row(i)) {
      require(std::isfinite(v), ErrorKind::malformed_data,
              "non-finite value in dataset row " + std::to_string(i));
    }
  }
}

Dataset::Dataset(std::size_t n, std::size_t d, std::vector<double> values)
    : Dataset(Matrix(n, d, std::move(values))) {}

}  // namespace depthforge
