// AVX2 + FMA kernels. Compiled with -mavx2 -mfma -mpopcnt; only reached
// after a runtime CPU check.

#include <immintrin.h>

#include "depthforge/simd/kernels.hpp"

namespace depthforge::simd {
namespace {

__m256i tail_mask(std::size_t lanes) {
  const __m256i idx = _mm256_set_epi64x(3, 2, 1, 0);
  return _mm256_cmpgt_epi64(_mm256_set1_epi64x(static_cast<long long>(lanes)), idx);
}

template <int R>
void project_tile_rows(const TileArgs& a) {
  const std::size_t lb = a.depth_begin;
  const std::size_t le = a.depth_end;
  std::size_t c = 0;
  for (; c + 8 <= a.cols; c += 8) {
    __m256d acc[R][2];
    for (int r = 0; r < R; ++r) {
      double* out = a.out + r * a.out_stride + c;
      acc[r][0] = a.accumulate ? _mm256_loadu_pd(out) : _mm256_setzero_pd();
      acc[r][1] = a.accumulate ? _mm256_loadu_pd(out + 4) : _mm256_setzero_pd();
    }
    for (std::size_t l = lb; l < le; ++l) {
      const double* x = a.xt + l * a.xt_stride + c;
      const __m256d x0 = _mm256_loadu_pd(x);
      const __m256d x1 = _mm256_loadu_pd(x + 4);
      for (int r = 0; r < R; ++r) {
        const __m256d b = _mm256_broadcast_sd(a.u + r * a.u_stride + l);
        acc[r][0] = _mm256_fmadd_pd(b, x0, acc[r][0]);
        acc[r][1] = _mm256_fmadd_pd(b, x1, acc[r][1]);
      }
    }
    for (int r = 0; r < R; ++r) {
      double* out = a.out + r * a.out_stride + c;
      _mm256_storeu_pd(out, acc[r][0]);
      _mm256_storeu_pd(out + 4, acc[r][1]);
    }
  }
  while (c < a.cols) {
    const std::size_t lanes = a.cols - c < 4 ? a.cols - c : 4;
    const __m256i mask = tail_mask(lanes);
    __m256d acc[R];
    for (int r = 0; r < R; ++r) {
      acc[r] = a.accumulate ? _mm256_maskload_pd(a.out + r * a.out_stride + c, mask) : _mm256_setzero_pd();
    }
    for (std::size_t l = lb; l < le; ++l) {
      const __m256d x = _mm256_maskload_pd(a.xt + l * a.xt_stride + c, mask);
      for (int r = 0; r < R; ++r) {
        acc[r] = _mm256_fmadd_pd(_mm256_broadcast_sd(a.u + r * a.u_stride + l), x, acc[r]);
      }
    }
    for (int r = 0; r < R; ++r) _mm256_maskstore_pd(a.out + r * a.out_stride + c, mask, acc[r]);
    c += lanes;
  }
}

void project_tile_avx2(const TileArgs& a) {
  switch (a.rows) {
    case 1: project_tile_rows<1>(a); break;
    case 2: project_tile_rows<2>(a); break;
    case 3: project_tile_rows<3>(a); break;
    default: project_tile_rows<4>(a); break;
  }
}

void count_le_ge_avx2(const double* v, std::size_t n, double q, std::size_t* le, std::size_t* ge) {
  const __m256d qv = _mm256_set1_pd(q);
  std::size_t below_or_equal = 0;
  std::size_t above_or_equal = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    below_or_equal += __builtin_popcount(_mm256_movemask_pd(_mm256_cmp_pd(x, qv, _CMP_LE_OQ)));
    above_or_equal += __builtin_popcount(_mm256_movemask_pd(_mm256_cmp_pd(x, qv, _CMP_GE_OQ)));
  }
  for (; i < n; ++i) {
    below_or_equal += v[i] <= q;
    above_or_equal += v[i] >= q;
  }
  *le = below_or_equal;
  *ge = above_or_equal;
}

// Lane permutations packing the selected 64-bit lanes to the front, indexed by
// a 4-bit movemask and expressed as 32-bit lane indices.
struct CompressTable {
  alignas(32) int idx[16][8];
  constexpr CompressTable() : idx{} {
    for (int mask = 0; mask < 16; ++mask) {
      int out = 0;
      for (int lane = 0; lane < 4; ++lane) {
        if (mask & (1 << lane)) {
          idx[mask][2 * out] = 2 * lane;
          idx[mask][2 * out + 1] = 2 * lane + 1;
          ++out;
        }
      }
      for (; out < 4; ++out) {
        idx[mask][2 * out] = 0;
        idx[mask][2 * out + 1] = 1;
      }
    }
  }
};
constexpr CompressTable kCompress{};

inline __m256d compress(__m256d x, int mask) {
  const __m256i perm = _mm256_load_si256(reinterpret_cast<const __m256i*>(kCompress.idx[mask]));
  return _mm256_castsi256_pd(_mm256_permutevar8x32_epi32(_mm256_castpd_si256(x), perm));
}

std::size_t filter_range_avx2(const double* in, std::size_t n, double lo, double hi, double* out,
                              std::size_t* below) {
  const __m256d lov = _mm256_set1_pd(lo);
  const __m256d hiv = _mm256_set1_pd(hi);
  std::size_t kept = 0;
  std::size_t under = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(in + i);
    const int keep = _mm256_movemask_pd(
        _mm256_and_pd(_mm256_cmp_pd(x, lov, _CMP_GE_OQ), _mm256_cmp_pd(x, hiv, _CMP_LE_OQ)));
    under += __builtin_popcount(_mm256_movemask_pd(_mm256_cmp_pd(x, lov, _CMP_LT_OQ)));
    // kept <= i, so when out aliases in the full-width store only touches
    // lanes already loaded.
    _mm256_storeu_pd(out + kept, compress(x, keep));
    kept += __builtin_popcount(keep);
  }
  for (; i < n; ++i) {
    const double x = in[i];
    out[kept] = x;
    kept += (x >= lo) & (x <= hi);
    under += x < lo;
  }
  *below = under;
  return kept;
}

void abs_deviation_avx2(const double* in, std::size_t n, double center, double* out) {
  const __m256d cv = _mm256_set1_pd(center);
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_andnot_pd(sign, _mm256_sub_pd(_mm256_loadu_pd(in + i), cv)));
  }
  if (i < n) {
    const __m256i mask = tail_mask(n - i);
    const __m256d x = _mm256_maskload_pd(in + i, mask);
    _mm256_maskstore_pd(out + i, mask, _mm256_andnot_pd(sign, _mm256_sub_pd(x, cv)));
  }
}

std::size_t positive_deviation_avx2(const double* in, std::size_t n, double center, double* out) {
  const __m256d cv = _mm256_set1_pd(center);
  std::size_t kept = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(in + i);
    const int m = _mm256_movemask_pd(_mm256_cmp_pd(x, cv, _CMP_GT_OQ));
    _mm256_storeu_pd(out + kept, compress(_mm256_sub_pd(x, cv), m));
    kept += __builtin_popcount(m);
  }
  for (; i < n; ++i) {
    const double x = in[i];
    out[kept] = x - center;
    kept += x > center;
  }
  return kept;
}

}  // namespace

namespace detail {
const KernelTable kAvx2Kernels{
    Isa::avx2,          project_tile_avx2,     count_le_ge_avx2, filter_range_avx2,
    abs_deviation_avx2, positive_deviation_avx2,
};
}  // namespace detail

}  // namespace depthforge::simd
