#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "depthforge/matrix.hpp"
#include "depthforge/simd/kernels.hpp"

namespace depthforge {

enum class DepthNotion { halfspace, projection, asym_projection };

[[nodiscard]] std::string_view notion_name(DepthNotion notion);
/// Accepts "halfspace", "projection", "asymprojection" and "asym_projection".
[[nodiscard]] DepthNotion parse_notion(std::string_view text);

/// Projections of the data (`values`) and of the query onto one direction.
struct ProjectedSample {
  std::span<const double> values;
  double query;
};

/// Reusable buffers for the median selection. One per worker.
struct SelectionScratch {
  std::vector<double> work;
  std::vector<double> deviations;

  void reserve(std::size_t n);
};

/// Sample median; the midpoint of the two central order statistics for even n.
/// Expected linear time. `values` is left untouched.
[[nodiscard]] double median(std::span<const double> values);
[[nodiscard]] double median(std::span<const double> values, const simd::KernelTable& kernels,
                            std::vector<double>& work);

[[nodiscard]] double halfspace_depth_1d(const ProjectedSample& s);
[[nodiscard]] double projection_depth_1d(const ProjectedSample& s);
/// Scale is the median of the strictly positive deviations above the median.
[[nodiscard]] double asym_projection_depth_1d(const ProjectedSample& s);
[[nodiscard]] double univariate_depth(DepthNotion notion, const ProjectedSample& s);

/// Unchecked variant for the optimizer's inner loop: no validation, caller
/// provides the kernels and scratch.
[[nodiscard]] double univariate_depth(DepthNotion notion, std::span<const double> values, double query,
                                      const simd::KernelTable& kernels, SelectionScratch& scratch);

/// Location and symmetric positive-definite scatter. The Cholesky factor is
/// computed once on construction.
class LocationScatter {
 public:
  LocationScatter(std::vector<double> location, Matrix scatter);

  [[nodiscard]] std::size_t dim() const noexcept { return location_.size(); }
  [[nodiscard]] std::span<const double> location() const noexcept { return location_; }
  [[nodiscard]] const Matrix& scatter() const noexcept { return scatter_; }

  /// (z - mu)^T Sigma^{-1} (z - mu) through a triangular solve.
  [[nodiscard]] double quadratic_form(std::span<const double> z) const;

 private:
  std::vector<double> location_;
  Matrix scatter_;
  Matrix cholesky_;  // lower triangle
};

[[nodiscard]] double mahalanobis_depth(std::span<const double> z, const LocationScatter& est);

/// Column mean and the 1/n sample scatter.
[[nodiscard]] LocationScatter estimate_mle(const Dataset& data);

}  // namespace depthforge
