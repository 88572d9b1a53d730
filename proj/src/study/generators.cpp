#include "depthforge/study/generators.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "depthforge/error.hpp"
#include "depthforge/parallel.hpp"
#include "depthforge/rng.hpp"

namespace depthforge::study {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

RowMajor toeplitz_factor(std::size_t dim) {
  const Matrix sigma = toeplitz_scatter(dim);
  const Eigen::Map<const RowMajor> s(sigma.data(), static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const Eigen::LLT<RowMajor> llt(s);
  if (llt.info() != Eigen::Success) fail(ErrorKind::numerical, "internal error: Toeplitz scatter is not positive definite");
  return llt.matrixL();
}

void require_spec(const ToeplitzGaussianSpec& spec) {
  require(spec.dim >= 1, ErrorKind::invalid_argument, "dimension must be at least 1");
  require(spec.n >= 1, ErrorKind::invalid_argument, "sample size must be at least 1");
}

// Fills row i of an n x d matrix with L g, scaled per row by `scale(stream)`.
template <typename Scale>
Dataset correlated_rows(const ToeplitzGaussianSpec& spec, StreamTag tag, std::size_t workers, Scale scale) {
  const std::size_t d = spec.dim;
  const RowMajor factor = toeplitz_factor(d);
  Matrix out(spec.n, d);
  parallel_for(spec.n, workers, 256, [&](std::size_t begin, std::size_t end) {
    std::vector<double> g(d);
    for (std::size_t i = begin; i < end; ++i) {
      Substream stream = tagged_stream(spec.seed, tag, i);
      std::normal_distribution<double> normal;
      for (double& v : g) v = normal(stream);
      const double s = scale(stream);
      auto row = out.row(i);
      for (std::size_t a = 0; a < d; ++a) {
        double acc = 0.0;
        for (std::size_t b = 0; b <= a; ++b) acc += factor(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) * g[b];
        row[a] = acc * s;
      }
    }
  });
  return Dataset(std::move(out));
}

}  // namespace

std::string_view distribution_name(Distribution dist) {
  switch (dist) {
    case Distribution::gaussian:
      return "gaussian";
    case Distribution::student_t:
      return "student_t";
    case Distribution::exponential:
      return "exponential";
  }
  return "unknown";
}

Distribution parse_distribution(std::string_view text) {
  if (text == "gaussian" || text == "normal") return Distribution::gaussian;
  if (text == "student_t" || text == "t") return Distribution::student_t;
  if (text == "exponential") return Distribution::exponential;
  fail(ErrorKind::invalid_argument, "unknown distribution '" + std::string(text) + "'");
}

Matrix toeplitz_scatter(std::size_t dim) {
  Matrix sigma(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      sigma(i, j) = std::ldexp(1.0, -static_cast<int>(i > j ? i - j : j - i));
  return sigma;
}

Dataset gen_toeplitz_gaussian(const ToeplitzGaussianSpec& spec, std::size_t workers) {
  require_spec(spec);
  return correlated_rows(spec, StreamTag::gaussian_rows, workers, [](Substream&) { return 1.0; });
}

Dataset gen_student_t(const ToeplitzGaussianSpec& spec, double nu, std::size_t workers) {
  require_spec(spec);
  require(nu > 0.0 && std::isfinite(nu), ErrorKind::invalid_argument, "degrees of freedom must be positive");
  return correlated_rows(spec, StreamTag::student_rows, workers, [nu](Substream& stream) {
    std::chi_squared_distribution<double> chi2(nu);
    double w = 0.0;
    while (w <= 0.0) w = chi2(stream);
    return std::sqrt(nu / w);
  });
}

Dataset gen_exponential(std::size_t dim, std::size_t n, std::uint64_t seed, std::size_t workers) {
  require(dim >= 1 && n >= 1, ErrorKind::invalid_argument, "dimension and sample size must be at least 1");
  Matrix out(n, dim);
  parallel_for(n, workers, 256, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Substream stream = tagged_stream(seed, StreamTag::exponential_rows, i);
      std::exponential_distribution<double> expo(1.0);
      for (double& v : out.row(i)) v = expo(stream);
    }
  });
  return Dataset(std::move(out));
}

Dataset generate(Distribution dist, const ToeplitzGaussianSpec& spec, double nu, std::size_t workers) {
  switch (dist) {
    case Distribution::gaussian:
      return gen_toeplitz_gaussian(spec, workers);
    case Distribution::student_t:
      return gen_student_t(spec, nu, workers);
    case Distribution::exponential:
      return gen_exponential(spec.dim, spec.n, spec.seed, workers);
  }
  fail(ErrorKind::invalid_argument, "unknown distribution");
}

Matrix select_queries(const Dataset& data, std::size_t count, std::uint64_t seed) {
  const std::size_t n = data.size();
  require(count >= 1 && count <= n, ErrorKind::invalid_argument,
          "query count must lie in [1, " + std::to_string(n) + "]");
  std::vector<std::size_t> index(n);
  std::iota(index.begin(), index.end(), std::size_t{0});
  Substream stream = tagged_stream(seed, StreamTag::query_selection, 0);
  Matrix out(count, data.dim());
  for (std::size_t t = 0; t < count; ++t) {
    std::uniform_int_distribution<std::size_t> pick(t, n - 1);
    std::swap(index[t], index[pick(stream)]);
    const auto row = data.row(index[t]);
    std::copy(row.begin(), row.end(), out.row(t).begin());
  }
  return out;
}

std::vector<double> true_density_rank(const LocationScatter& law, const Matrix& queries) {
  require(queries.cols() == law.dim(), ErrorKind::dimension_mismatch, "queries do not match the law's dimension");
  const std::size_t count = queries.rows();
  std::vector<double> forms(count);
  for (std::size_t i = 0; i < count; ++i) forms[i] = law.quadratic_form(queries.row(i));
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return forms[a] < forms[b]; });
  std::vector<double> ranks(count);
  for (std::size_t i = 0; i < count;) {
    std::size_t j = i;
    while (j + 1 < count && forms[order[j + 1]] == forms[order[i]]) ++j;
    const double shared = static_cast<double>(i + j + 2) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
    i = j + 1;
  }
  return ranks;
}

}  // namespace depthforge::study
