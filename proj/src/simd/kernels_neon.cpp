// AArch64 NEON kernels. Only built on aarch64 targets.

#include <arm_neon.h>

#include <cmath>

#include "depthforge/simd/kernels.hpp"

namespace depthforge::simd {
namespace {

template <int R>
void project_tile_rows(const TileArgs& a) {
  const std::size_t lb = a.depth_begin;
  const std::size_t le = a.depth_end;
  std::size_t c = 0;
  for (; c + 4 <= a.cols; c += 4) {
    float64x2_t acc[R][2];
    for (int r = 0; r < R; ++r) {
      double* out = a.out + r * a.out_stride + c;
      acc[r][0] = a.accumulate ? vld1q_f64(out) : vdupq_n_f64(0.0);
      acc[r][1] = a.accumulate ? vld1q_f64(out + 2) : vdupq_n_f64(0.0);
    }
    for (std::size_t l = lb; l < le; ++l) {
      const double* x = a.xt + l * a.xt_stride + c;
      const float64x2_t x0 = vld1q_f64(x);
      const float64x2_t x1 = vld1q_f64(x + 2);
      for (int r = 0; r < R; ++r) {
        const float64x2_t b = vdupq_n_f64(a.u[r * a.u_stride + l]);
        acc[r][0] = vfmaq_f64(acc[r][0], b, x0);
        acc[r][1] = vfmaq_f64(acc[r][1], b, x1);
      }
    }
    for (int r = 0; r < R; ++r) {
      double* out = a.out + r * a.out_stride + c;
      vst1q_f64(out, acc[r][0]);
      vst1q_f64(out + 2, acc[r][1]);
    }
  }
  for (; c < a.cols; ++c) {
    for (int r = 0; r < R; ++r) {
      double* out = a.out + r * a.out_stride + c;
      double acc = a.accumulate ? *out : 0.0;
      for (std::size_t l = lb; l < le; ++l) acc = std::fma(a.u[r * a.u_stride + l], a.xt[l * a.xt_stride + c], acc);
      *out = acc;
    }
  }
}

void project_tile_neon(const TileArgs& a) {
  switch (a.rows) {
    case 1: project_tile_rows<1>(a); break;
    case 2: project_tile_rows<2>(a); break;
    case 3: project_tile_rows<3>(a); break;
    default: project_tile_rows<4>(a); break;
  }
}

void count_le_ge_neon(const double* v, std::size_t n, double q, std::size_t* le, std::size_t* ge) {
  const float64x2_t qv = vdupq_n_f64(q);
  uint64x2_t le_acc = vdupq_n_u64(0);
  uint64x2_t ge_acc = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x = vld1q_f64(v + i);
    // Comparison lanes are all-ones (== -1) when true.
    le_acc = vsubq_u64(le_acc, vcleq_f64(x, qv));
    ge_acc = vsubq_u64(ge_acc, vcgeq_f64(x, qv));
  }
  std::size_t below_or_equal = vgetq_lane_u64(le_acc, 0) + vgetq_lane_u64(le_acc, 1);
  std::size_t above_or_equal = vgetq_lane_u64(ge_acc, 0) + vgetq_lane_u64(ge_acc, 1);
  for (; i < n; ++i) {
    below_or_equal += v[i] <= q;
    above_or_equal += v[i] >= q;
  }
  *le = below_or_equal;
  *ge = above_or_equal;
}

std::size_t filter_range_neon(const double* in, std::size_t n, double lo, double hi, double* out,
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

void abs_deviation_neon(const double* in, std::size_t n, double center, double* out) {
  const float64x2_t cv = vdupq_n_f64(center);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vabsq_f64(vsubq_f64(vld1q_f64(in + i), cv)));
  for (; i < n; ++i) out[i] = std::fabs(in[i] - center);
}

std::size_t positive_deviation_neon(const double* in, std::size_t n, double center, double* out) {
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
const KernelTable kNeonKernels{
    Isa::neon,          project_tile_neon,     count_le_ge_neon, filter_range_neon,
    abs_deviation_neon, positive_deviation_neon,
};
}  // namespace detail

}  // namespace depthforge::simd
