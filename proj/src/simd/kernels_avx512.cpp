// AVX-512F kernels. Compiled with -mavx512f -mfma -mpopcnt; only reached
// after a runtime CPU check.

#include <immintrin.h>

#include "depthforge/simd/kernels.hpp"

namespace depthforge::simd {
namespace {

__mmask8 tail_mask(std::size_t lanes) { return static_cast<__mmask8>((1u << lanes) - 1u); }

template <int R>
void project_tile_rows(const TileArgs& a) {
  const std::size_t lb = a.depth_begin;
  const std::size_t le = a.depth_end;
  std::size_t c = 0;
  for (; c + 16 <= a.cols; c += 16) {
    __m512d acc[R][2];
    for (int r = 0; r < R; ++r) {
      double* out = a.out + r * a.out_stride + c;
      acc[r][0] = a.accumulate ? _mm512_loadu_pd(out) : _mm512_setzero_pd();
      acc[r][1] = a.accumulate ? _mm512_loadu_pd(out + 8) : _mm512_setzero_pd();
    }
    for (std::size_t l = lb; l < le; ++l) {
      const double* x = a.xt + l * a.xt_stride + c;
      const __m512d x0 = _mm512_loadu_pd(x);
      const __m512d x1 = _mm512_loadu_pd(x + 8);
      for (int r = 0; r < R; ++r) {
        const __m512d b = _mm512_set1_pd(a.u[r * a.u_stride + l]);
        acc[r][0] = _mm512_fmadd_pd(b, x0, acc[r][0]);
        acc[r][1] = _mm512_fmadd_pd(b, x1, acc[r][1]);
      }
    }
    for (int r = 0; r < R; ++r) {
      double* out = a.out + r * a.out_stride + c;
      _mm512_storeu_pd(out, acc[r][0]);
      _mm512_storeu_pd(out + 8, acc[r][1]);
    }
  }
  while (c < a.cols) {
    const std::size_t lanes = a.cols - c < 8 ? a.cols - c : 8;
    const __mmask8 mask = tail_mask(lanes);
    __m512d acc[R];
    for (int r = 0; r < R; ++r) {
      acc[r] = a.accumulate ? _mm512_maskz_loadu_pd(mask, a.out + r * a.out_stride + c) : _mm512_setzero_pd();
    }
    for (std::size_t l = lb; l < le; ++l) {
      const __m512d x = _mm512_maskz_loadu_pd(mask, a.xt + l * a.xt_stride + c);
      for (int r = 0; r < R; ++r) {
        acc[r] = _mm512_fmadd_pd(_mm512_set1_pd(a.u[r * a.u_stride + l]), x, acc[r]);
      }
    }
    for (int r = 0; r < R; ++r) _mm512_mask_storeu_pd(a.out + r * a.out_stride + c, mask, acc[r]);
    c += lanes;
  }
}

void project_tile_avx512(const TileArgs& a) {
  switch (a.rows) {
    case 1: project_tile_rows<1>(a); break;
    case 2: project_tile_rows<2>(a); break;
    case 3: project_tile_rows<3>(a); break;
    default: project_tile_rows<4>(a); break;
  }
}

void count_le_ge_avx512(const double* v, std::size_t n, double q, std::size_t* le, std::size_t* ge) {
  const __m512d qv = _mm512_set1_pd(q);
  std::size_t below_or_equal = 0;
  std::size_t above_or_equal = 0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m512d x = _mm512_loadu_pd(v + i);
    below_or_equal += __builtin_popcount(_mm512_cmp_pd_mask(x, qv, _CMP_LE_OQ));
    above_or_equal += __builtin_popcount(_mm512_cmp_pd_mask(x, qv, _CMP_GE_OQ));
  }
  if (i < n) {
    const __mmask8 mask = tail_mask(n - i);
    const __m512d x = _mm512_maskz_loadu_pd(mask, v + i);
    below_or_equal += __builtin_popcount(_mm512_mask_cmp_pd_mask(mask, x, qv, _CMP_LE_OQ));
    above_or_equal += __builtin_popcount(_mm512_mask_cmp_pd_mask(mask, x, qv, _CMP_GE_OQ));
  }
  *le = below_or_equal;
  *ge = above_or_equal;
}

std::size_t filter_range_avx512(const double* in, std::size_t n, double lo, double hi, double* out,
                                std::size_t* below) {
  const __m512d lov = _mm512_set1_pd(lo);
  const __m512d hiv = _mm512_set1_pd(hi);
  std::size_t kept = 0;
  std::size_t under = 0;
  std::size_t i = 0;
  // Compressing into a register and storing all lanes is much cheaper than a
  // compress-store to memory. kept <= i, so the store stays inside lanes
  // already loaded even when out aliases in.
  for (; i + 8 <= n; i += 8) {
    const __m512d x = _mm512_loadu_pd(in + i);
    const __mmask8 keep = _mm512_mask_cmp_pd_mask(_mm512_cmp_pd_mask(x, lov, _CMP_GE_OQ), x, hiv, _CMP_LE_OQ);
    under += __builtin_popcount(_mm512_cmp_pd_mask(x, lov, _CMP_LT_OQ));
    _mm512_storeu_pd(out + kept, _mm512_maskz_compress_pd(keep, x));
    kept += __builtin_popcount(keep);
  }
  if (i < n) {
    const __mmask8 valid = tail_mask(n - i);
    const __m512d x = _mm512_maskz_loadu_pd(valid, in + i);
    const __mmask8 keep = _mm512_mask_cmp_pd_mask(_mm512_mask_cmp_pd_mask(valid, x, lov, _CMP_GE_OQ), x, hiv,
                                                  _CMP_LE_OQ);
    under += __builtin_popcount(_mm512_mask_cmp_pd_mask(valid, x, lov, _CMP_LT_OQ));
    _mm512_mask_compressstoreu_pd(out + kept, keep, x);
    kept += __builtin_popcount(keep);
  }
  *below = under;
  return kept;
}

void abs_deviation_avx512(const double* in, std::size_t n, double center, double* out) {
  const __m512d cv = _mm512_set1_pd(center);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm512_storeu_pd(out + i, _mm512_abs_pd(_mm512_sub_pd(_mm512_loadu_pd(in + i), cv)));
  }
  if (i < n) {
    const __mmask8 mask = tail_mask(n - i);
    const __m512d x = _mm512_maskz_loadu_pd(mask, in + i);
    _mm512_mask_storeu_pd(out + i, mask, _mm512_abs_pd(_mm512_sub_pd(x, cv)));
  }
}

std::size_t positive_deviation_avx512(const double* in, std::size_t n, double center, double* out) {
  const __m512d cv = _mm512_set1_pd(center);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < n; i += 8) {
    const __mmask8 valid = n - i >= 8 ? static_cast<__mmask8>(0xff) : tail_mask(n - i);
    const __m512d x = _mm512_maskz_loadu_pd(valid, in + i);
    const __mmask8 m = _mm512_mask_cmp_pd_mask(valid, x, cv, _CMP_GT_OQ);
    _mm512_mask_compressstoreu_pd(out + kept, m, _mm512_sub_pd(x, cv));
    kept += __builtin_popcount(m);
  }
  return kept;
}

}  // namespace

namespace detail {
const KernelTable kAvx512Kernels{
    Isa::avx512,          project_tile_avx512,     count_le_ge_avx512, filter_range_avx512,
    abs_deviation_avx512, positive_deviation_avx512,
};
}  // namespace detail

}  // namespace depthforge::simd
