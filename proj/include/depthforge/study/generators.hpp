#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "depthforge/matrix.hpp"
#include "depthforge/univariate_depth.hpp"

namespace depthforge::study {

/// Zero-mean normal data with Toeplitz scatter sigma_ij = 2^{-|i-j|}.
struct ToeplitzGaussianSpec {
  std::size_t dim = 1;
  std::size_t n = 1;
  std::uint64_t seed = 0;
};

enum class Distribution { gaussian, student_t, exponential };

[[nodiscard]] std::string_view distribution_name(Distribution dist);
/// Accepts "gaussian", "student_t" (or "t") and "exponential".
[[nodiscard]] Distribution parse_distribution(std::string_view text);

[[nodiscard]] Matrix toeplitz_scatter(std::size_t dim);

/// Row i is L g_i with L the Cholesky factor of the Toeplitz scatter and g_i
/// drawn from its own substream, so rows do not depend on n or on workers.
[[nodiscard]] Dataset gen_toeplitz_gaussian(const ToeplitzGaussianSpec& spec, std::size_t workers = 1);

/// Elliptical multivariate t: L g sqrt(nu / chi2_nu).
[[nodiscard]] Dataset gen_student_t(const ToeplitzGaussianSpec& spec, double nu, std::size_t workers = 1);

/// Independent standard exponential coordinates.
[[nodiscard]] Dataset gen_exponential(std::size_t dim, std::size_t n, std::uint64_t seed, std::size_t workers = 1);

/// Dispatches on `dist`; nu is ignored unless dist is student_t.
[[nodiscard]] Dataset generate(Distribution dist, const ToeplitzGaussianSpec& spec, double nu, std::size_t workers = 1);

/// `count` distinct rows of the data, chosen uniformly without replacement
/// and returned in selection order.
[[nodiscard]] Matrix select_queries(const Dataset& data, std::size_t count, std::uint64_t seed);

/// Average ranks (1 = most central) of the queries by descending density of an
/// elliptical law with the given location and scatter, i.e. by ascending
/// Mahalanobis quadratic form. Ties share the mean of their ranks.
[[nodiscard]] std::vector<double> true_density_rank(const LocationScatter& law, const Matrix& queries);

}  // namespace depthforge::study
