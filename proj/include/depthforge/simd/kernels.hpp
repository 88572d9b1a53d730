#pragma once
// Data-parallel inner loops with one scalar reference implementation and
// ISA-specific variants selected at runtime.
//
// Every variant must be bit-identical to the scalar reference. The projection
// kernel vectorizes across observations, never across the reduction axis, so
// each output entry sees the same sequence of fused multiply-adds in every ISA.
//
// This header is included from translation units compiled with -mavx2 or
// -mavx512f; it must stay free of inline functions and templates.

#include <cstddef>

namespace depthforge::simd {

enum class Isa { scalar, avx2, avx512, neon };

/// Arguments for one projection tile:
///   out[r][c] = (accumulate ? out[r][c] : 0) (+) sum_{l in [depth_begin, depth_end)} u[r][l] * xt[l][c]
/// with the sum evaluated as an in-order chain of fused multiply-adds.
struct TileArgs {
  const double* u;         // first direction row of the tile
  std::size_t u_stride;    // distance between direction rows
  std::size_t rows;        // directions in the tile, 1..4
  const double* xt;        // first observation column of the tile, row 0 of the transposed data
  std::size_t xt_stride;   // distance between coordinate rows of the transposed data
  std::size_t cols;        // observations in the tile
  std::size_t depth_begin;
  std::size_t depth_end;
  double* out;
  std::size_t out_stride;
  bool accumulate;
};

inline constexpr std::size_t kMaxTileRows = 4;

struct KernelTable {
  Isa isa;
  void (*project_tile)(const TileArgs& args);
  /// Counts entries <= q and >= q.
  void (*count_le_ge)(const double* v, std::size_t n, double q, std::size_t* le, std::size_t* ge);
  /// Stable compaction of the entries of `in` lying in [lo, hi] into `out`
  /// (which may alias `in`); returns the kept count and writes the number of
  /// entries < lo to *below. `out` must have room for n values.
  std::size_t (*filter_range)(const double* in, std::size_t n, double lo, double hi, double* out,
                              std::size_t* below);
  /// out[i] = |in[i] - center|.
  void (*abs_deviation)(const double* in, std::size_t n, double center, double* out);
  /// Writes in[i] - center for every in[i] > center, compacted (out may alias
  /// in and needs room for n values); returns the count.
  std::size_t (*positive_deviation)(const double* in, std::size_t n, double center, double* out);
};

namespace detail {
extern const KernelTable kScalarKernels;
#if defined(DEPTHFORGE_HAVE_AVX2)
extern const KernelTable kAvx2Kernels;
#endif
#if defined(DEPTHFORGE_HAVE_AVX512)
extern const KernelTable kAvx512Kernels;
#endif
#if defined(DEPTHFORGE_HAVE_NEON)
extern const KernelTable kNeonKernels;
#endif
}  // namespace detail

}  // namespace depthforge::simd
