#include "depthforge/univariate_depth.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "depthforge/error.hpp"
#include "depthforge/simd/dispatch.hpp"

namespace depthforge {

namespace {

// Below this length the remaining range is handed to std::nth_element.
constexpr std::size_t kDirectCutoff = 512;
constexpr std::size_t kSampleSize = 256;
// Half-width of the sampled bracket, in sample positions: 3.5 standard
// deviations of a sample quantile's position (at most sqrt(s)/2).
constexpr double kBracket = 28.0;

struct OrderStats {
  double at;
  double next;
};

// Places the order statistic `rank` of v[0, len) at v[rank] with smaller
// entries before it and larger-or-equal ones after, like std::nth_element.
// Branch-free Lomuto partitions avoid the mispredictions that dominate on
// short random ranges; heavy ties or unlucky pivots hand over to
// std::nth_element after a bounded number of passes.
void select_small(double* v, std::size_t len, std::size_t rank) {
  std::size_t lo = 0;
  std::size_t hi = len;
  int passes = 0;
  while (hi - lo > 16) {
    if (++passes > 24) {
      std::nth_element(v + lo, v + rank, v + hi);
      return;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    double a = v[lo];
    double b = v[mid];
    double c = v[hi - 1];
    if (a > b) std::swap(a, b);
    if (b > c) b = std::max(a, c);
    const double pivot = b;
    const std::size_t at = v[mid] == pivot ? mid : (v[lo] == pivot ? lo : hi - 1);
    std::swap(v[at], v[hi - 1]);
    std::size_t store = lo;
    for (std::size_t i = lo; i + 1 < hi; ++i) {
      const double x = v[i];
      v[i] = v[store];
      v[store] = x;
      store += x < pivot;
    }
    std::swap(v[store], v[hi - 1]);
    if (store == rank) return;
    if (rank < store)
      hi = store;
    else
      lo = store + 1;
  }
  for (std::size_t i = lo + 1; i < hi; ++i) {
    const double x = v[i];
    std::size_t j = i;
    for (; j > lo && v[j - 1] > x; --j) v[j] = v[j - 1];
    v[j] = x;
  }
}

OrderStats select_direct(double* v, std::size_t len, std::size_t rank, bool want_next) {
  select_small(v, len, rank);
  OrderStats out{v[rank], 0.0};
  if (want_next) out.next = *std::min_element(v + rank + 1, v + len);
  return out;
}

// Order statistic `rank` (0-based) of `in`, plus rank + 1 when asked.
// A deterministic sample brackets the target ranks; the bracket is filtered
// with the SIMD compaction kernel until the remainder is small. If a bracket
// misses, the whole input is selected directly.
OrderStats select(std::span<const double> in, std::size_t rank, bool want_next, const simd::KernelTable& kt,
                  std::vector<double>& work) {
  const std::size_t n = in.size();
  if (work.size() < n) work.resize(n);
  double* buf = work.data();
  const double* src = in.data();
  std::size_t len = n;
  std::size_t k = rank;
  const std::size_t need = want_next ? 1 : 0;

  while (len > kDirectCutoff) {
    std::array<double, kSampleSize> sample;
    for (std::size_t t = 0; t < kSampleSize; ++t) sample[t] = src[((2 * t + 1) * len) / (2 * kSampleSize)];

    const double pos = (static_cast<double>(k) + 0.5 * static_cast<double>(need) + 0.5) *
                       static_cast<double>(kSampleSize) / static_cast<double>(len);
    const double lo_pos = std::floor(pos - kBracket);
    const double hi_pos = std::ceil(pos + kBracket);
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    std::size_t upper = 0;
    if (lo_pos > 0.0) {
      const auto idx = static_cast<std::size_t>(lo_pos);
      select_small(sample.data(), kSampleSize, idx);
      lo = sample[idx];
      upper = idx + 1;
    }
    if (hi_pos < static_cast<double>(kSampleSize - 1)) {
      // Everything from `upper` on already sits at or above the low bound.
      const auto idx = static_cast<std::size_t>(hi_pos);
      select_small(sample.data() + upper, kSampleSize - upper, idx - upper);
      hi = sample[idx];
    }

    std::size_t below = 0;
    const std::size_t kept = kt.filter_range(src, len, lo, hi, buf, &below);
    const bool covered = below <= k && k + need < below + kept;
    if (!covered) {
      std::copy(in.begin(), in.end(), buf);
      return select_direct(buf, n, rank, want_next);
    }
    src = buf;
    k -= below;
    if (kept == len) break;
    len = kept;
  }

  if (src != buf) std::copy(src, src + len, buf);
  return select_direct(buf, len, k, want_next);
}

void require_sample(const ProjectedSample& s) {
  require(!s.values.empty(), ErrorKind::invalid_argument, "empty projection");
  require(std::isfinite(s.query), ErrorKind::invalid_argument, "projected query is not finite");
  require(std::all_of(s.values.begin(), s.values.end(), [](double x) { return std::isfinite(x); }),
          ErrorKind::invalid_argument, "projection contains non-finite values");
}

SelectionScratch& local_scratch() {
  thread_local SelectionScratch scratch;
  return scratch;
}

double halfspace_unchecked(std::span<const double> values, double query, const simd::KernelTable& kt) {
  std::size_t le = 0;
  std::size_t ge = 0;
  kt.count_le_ge(values.data(), values.size(), query, &le, &ge);
  return static_cast<double>(std::min(le, ge)) / static_cast<double>(values.size());
}

double projection_unchecked(std::span<const double> values, double query, const simd::KernelTable& kt,
                            SelectionScratch& scratch) {
  const double med = median(values, kt, scratch.work);
  if (query == med) return 1.0;
  const std::size_t n = values.size();
  if (scratch.deviations.size() < n) scratch.deviations.resize(n);
  kt.abs_deviation(values.data(), n, med, scratch.deviations.data());
  const double mad = median(std::span<const double>(scratch.deviations.data(), n), kt, scratch.work);
  if (mad == 0.0) return 0.0;
  return 1.0 / (1.0 + std::abs(query - med) / mad);
}

double asym_projection_unchecked(std::span<const double> values, double query, const simd::KernelTable& kt,
                                 SelectionScratch& scratch) {
  const double med = median(values, kt, scratch.work);
  if (query <= med) return 1.0;
  const std::size_t n = values.size();
  if (scratch.deviations.size() < n) scratch.deviations.resize(n);
  const std::size_t above = kt.positive_deviation(values.data(), n, med, scratch.deviations.data());
  if (above == 0) return 0.0;
  const double mad_plus = median(std::span<const double>(scratch.deviations.data(), above), kt, scratch.work);
  return 1.0 / (1.0 + (query - med) / mad_plus);
}

}  // namespace

std::string_view notion_name(DepthNotion notion) {
  switch (notion) {
    case DepthNotion::halfspace:
      return "halfspace";
    case DepthNotion::projection:
      return "projection";
    case DepthNotion::asym_projection:
      return "asymprojection";
  }
  return "unknown";
}

DepthNotion parse_notion(std::string_view text) {
  if (text == "halfspace") return DepthNotion::halfspace;
  if (text == "projection") return DepthNotion::projection;
  if (text == "asymprojection" || text == "asym_projection") return DepthNotion::asym_projection;
  fail(ErrorKind::invalid_argument, "unknown depth notion '" + std::string(text) + "'");
}

void SelectionScratch::reserve(std::size_t n) {
  if (work.size() < n) work.resize(n);
  if (deviations.size() < n) deviations.resize(n);
}

double median(std::span<const double> values, const simd::KernelTable& kernels, std::vector<double>& work) {
  const std::size_t n = values.size();
  if (n == 1) return values[0];
  if (n % 2 == 1) return select(values, n / 2, false, kernels, work).at;
  const OrderStats mid = select(values, n / 2 - 1, true, kernels, work);
  return std::midpoint(mid.at, mid.next);
}

double median(std::span<const double> values) {
  require(!values.empty(), ErrorKind::invalid_argument, "median of an empty sample");
  return median(values, simd::active_kernels(), local_scratch().work);
}

double halfspace_depth_1d(const ProjectedSample& s) {
  require_sample(s);
  return halfspace_unchecked(s.values, s.query, simd::active_kernels());
}

double projection_depth_1d(const ProjectedSample& s) {
  require_sample(s);
  return projection_unchecked(s.values, s.query, simd::active_kernels(), local_scratch());
}

double asym_projection_depth_1d(const ProjectedSample& s) {
  require_sample(s);
  return asym_projection_unchecked(s.values, s.query, simd::active_kernels(), local_scratch());
}

double univariate_depth(DepthNotion notion, const ProjectedSample& s) {
  require_sample(s);
  return univariate_depth(notion, s.values, s.query, simd::active_kernels(), local_scratch());
}

double univariate_depth(DepthNotion notion, std::span<const double> values, double query,
                        const simd::KernelTable& kernels, SelectionScratch& scratch) {
  switch (notion) {
    case DepthNotion::halfspace:
      return halfspace_unchecked(values, query, kernels);
    case DepthNotion::projection:
      return projection_unchecked(values, query, kernels, scratch);
    case DepthNotion::asym_projection:
      return asym_projection_unchecked(values, query, kernels, scratch);
  }
  fail(ErrorKind::invalid_argument, "unknown depth notion");
}

LocationScatter::LocationScatter(std::vector<double> location, Matrix scatter)
    : location_(std::move(location)), scatter_(std::move(scatter)) {
  const std::size_t d = location_.size();
  require(d >= 1, ErrorKind::invalid_argument, "location must have at least one coordinate");
  require(scatter_.rows() == d && scatter_.cols() == d, ErrorKind::dimension_mismatch,
          "scatter must be " + std::to_string(d) + "x" + std::to_string(d));
  require(std::all_of(location_.begin(), location_.end(), [](double x) { return std::isfinite(x); }),
          ErrorKind::invalid_argument, "location is not finite");
  double scale = 1.0;
  for (double x : scatter_.values()) {
    require(std::isfinite(x), ErrorKind::invalid_argument, "scatter is not finite");
    scale = std::max(scale, std::abs(x));
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      require(std::abs(scatter_(i, j) - scatter_(j, i)) <= 1e-10 * scale, ErrorKind::invalid_argument,
              "scatter is not symmetric");

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> sigma(scatter_.data(), static_cast<Eigen::Index>(d),
                                         static_cast<Eigen::Index>(d));
  const Eigen::LLT<RowMajor> llt(sigma);
  require(llt.info() == Eigen::Success, ErrorKind::numerical, "scatter not positive definite");
  const RowMajor lower = llt.matrixL();
  cholesky_ = Matrix(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) cholesky_(i, j) = lower(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    require(cholesky_(i, i) > 0.0 && std::isfinite(cholesky_(i, i)), ErrorKind::numerical,
            "scatter not positive definite");
  }
}

double LocationScatter::quadratic_form(std::span<const double> z) const {
  const std::size_t d = dim();
  require(z.size() == d, ErrorKind::dimension_mismatch,
          "point has " + std::to_string(z.size()) + " coordinates, expected " + std::to_string(d));
  // Forward substitution L y = z - mu; the form is |y|^2.
  std::vector<double> y(d);
  double total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double acc = z[i] - location_[i];
    for (std::size_t j = 0; j < i; ++j) acc -= cholesky_(i, j) * y[j];
    y[i] = acc / cholesky_(i, i);
    total += y[i] * y[i];
  }
  return total;
}

double mahalanobis_depth(std::span<const double> z, const LocationScatter& est) {
  return 1.0 / (1.0 + est.quadratic_form(z));
}

LocationScatter estimate_mle(const Dataset& data) {
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  require(n > 1, ErrorKind::invalid_argument, "scatter estimation needs at least two observations");
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = data.row(i);
    for (std::size_t l = 0; l < d; ++l) mean[l] += row[l];
  }
  for (double& m : mean) m /= static_cast<double>(n);

  Matrix scatter(d, d);
  std::vector<double> centred(d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = data.row(i);
    for (std::size_t l = 0; l < d; ++l) centred[l] = row[l] - mean[l];
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b) scatter(a, b) += centred[a] * centred[b];
  }
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      scatter(a, b) /= static_cast<double>(n);
      scatter(b, a) = scatter(a, b);
    }
  }
  return LocationScatter(std::move(mean), std::move(scatter));
}

}  // namespace depthforge
