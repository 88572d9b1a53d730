// Scalar reference kernels. Every other ISA is tested for bit-identity
// against these.

#include <cmath>

#include "depthforge/simd/kernels.hpp"

namespace depthforge::simd {
namespace {

void project_tile_scalar(const TileArgs& a) {
  for (std::size_t r = 0; r < a.rows; ++r) {
    const double* u = a.u + r * a.u_stride;
    double* out = a.out + r * a.out_stride;
    for (std::size_t c = 0; c < a.cols; ++c) {
      double acc = a.accumulate ? out[c] : 0.0;
      for (std::size_t l = a.depth_begin; l < a.depth_end; ++l) {
        acc = std::fma(u[l], a.xt[l * a.xt_stride + c], acc);
      }
      out[c] = acc;
    }
  }
}

void count_le_ge_scalar(const double* v, std::size_t n, double q, std::size_t* le, std::size_t* ge) {
  std::size_t below_or_equal = 0;
  std::size_t above_or_equal = 0;
  for (std::size_t i = 0; i < n; ++i) {
    below_or_equal += v[i] <= q;
    above_or_equal += v[i] >= q;
  }
  *le = below_or_equal;
  *ge = above_or_equal;
}

std::size_t filter_range_scalar(const double* in, std::size_t n, double lo, double hi, double* out,
                                std::size_t* below) {
  std::size_t kept = 0;
  std::size_t under = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = in[i];
    out[kept] = x;
    kept += (x >= lo) & (x <= hi);
    under += x < lo;
  }
  *below = under;
  return kept;
}

void abs_deviation_scalar(const double* in, std::size_t n, double center, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(in[i] - center);
}

std::size_t positive_deviation_scalar(const double* in, std::size_t n, double center, double* out) {
  std::size_t kept = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = in[i];
    out[kept] = x - center;
    kept += x > center;
  }
  return kept;
}

}  // namespace

namespace detail {
const KernelTable kScalarKernels{
    Isa::scalar,          project_tile_scalar,     count_le_ge_scalar, filter_range_scalar,
    abs_deviation_scalar, positive_deviation_scalar,
};
}  // namespace detail

}  // namespace depthforge::simd
