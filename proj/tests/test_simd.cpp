#include <doctest.h>

#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "depthforge/simd/dispatch.hpp"
#include "oracles.hpp"

using namespace depthforge;
using simd::KernelTable;

namespace {

const KernelTable& scalar() { return simd::kernels_for(simd::Isa::scalar); }

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> sample_with_ties(std::mt19937_64& gen, std::size_t n) {
  std::vector<double> v = oracle::gaussian_values(n, gen());
  for (std::size_t i = 0; i < n; i += 3) v[i] = std::round(v[i] * 2) / 2;
  return v;
}

}  // namespace

TEST_CASE("supported ISAs include the scalar reference") {
  const auto isas = simd::supported_isas();
  REQUIRE(!isas.empty());
  CHECK(isas.front() == simd::Isa::scalar);
  for (auto isa : isas) {
    CHECK(simd::isa_supported(isa));
    CHECK(simd::kernels_for(isa).isa == isa);
  }
  MESSAGE("active ISA: " << simd::isa_name(simd::active_kernels().isa));
}

TEST_CASE("projection tiles are bit-identical across ISAs") {
  std::mt19937_64 gen(1);
  for (auto isa : simd::supported_isas()) {
    const KernelTable& k = simd::kernels_for(isa);
    CAPTURE(simd::isa_name(isa));
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t rows = 1 + gen() % simd::kMaxTileRows;
      const std::size_t cols = 1 + gen() % 70;
      const std::size_t d = 1 + gen() % 40;
      const std::size_t begin = gen() % d;
      const std::size_t end = begin + 1 + gen() % (d - begin);
      const std::size_t xt_stride = cols + gen() % 5;
      const std::size_t out_stride = cols + gen() % 3;
      const auto u = oracle::gaussian_values(rows * d, gen());
      const auto xt = oracle::gaussian_values(d * xt_stride, gen());
      const auto seed_out = oracle::gaussian_values(rows * out_stride, gen());
      const bool accumulate = trial % 2 == 1;

      std::vector<double> expected(seed_out);
      std::vector<double> got(seed_out);
      simd::TileArgs args{u.data(), d, rows, xt.data(), xt_stride, cols, begin, end, expected.data(), out_stride,
                          accumulate};
      scalar().project_tile(args);
      args.out = got.data();
      k.project_tile(args);
      CHECK(same_bits(expected, got));

      // Against the test's own fma chain.
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
          double acc = accumulate ? seed_out[r * out_stride + c] : 0.0;
          for (std::size_t l = begin; l < end; ++l) acc = std::fma(u[r * d + l], xt[l * xt_stride + c], acc);
          if (got[r * out_stride + c] != acc) FAIL_CHECK("tile entry differs from fma chain");
        }
    }
  }
}

TEST_CASE("counting kernels agree with the scalar reference") {
  std::mt19937_64 gen(2);
  for (auto isa : simd::supported_isas()) {
    const KernelTable& k = simd::kernels_for(isa);
    CAPTURE(simd::isa_name(isa));
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = gen() % 200;
      const auto v = sample_with_ties(gen, n);
      const double q = n > 0 && trial % 2 == 0 ? v[gen() % n] : 0.25;
      std::size_t le = 0, ge = 0, le_ref = 0, ge_ref = 0;
      k.count_le_ge(v.data(), n, q, &le, &ge);
      scalar().count_le_ge(v.data(), n, q, &le_ref, &ge_ref);
      CHECK(le == le_ref);
      CHECK(ge == ge_ref);
      std::size_t le_oracle = 0, ge_oracle = 0;
      for (double x : v) {
        le_oracle += x <= q;
        ge_oracle += x >= q;
      }
      CHECK(le == le_oracle);
      CHECK(ge == ge_oracle);
    }
  }
}

TEST_CASE("filter, deviation and compaction kernels agree with the scalar reference") {
  std::mt19937_64 gen(3);
  for (auto isa : simd::supported_isas()) {
    const KernelTable& k = simd::kernels_for(isa);
    CAPTURE(simd::isa_name(isa));
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = gen() % 300;
      const auto v = sample_with_ties(gen, n);
      const double lo = -0.5 + (trial % 3) * 0.25;
      const double hi = lo + 0.75;

      std::vector<double> out(n + 1), ref(n + 1);
      std::size_t below = 0, below_ref = 0;
      const std::size_t kept = k.filter_range(v.data(), n, lo, hi, out.data(), &below);
      const std::size_t kept_ref = scalar().filter_range(v.data(), n, lo, hi, ref.data(), &below_ref);
      REQUIRE(kept == kept_ref);
      CHECK(below == below_ref);
      out.resize(kept);
      ref.resize(kept);
      CHECK(same_bits(out, ref));
      std::vector<double> oracle_kept;
      std::size_t oracle_below = 0;
      for (double x : v) {
        if (x < lo) ++oracle_below;
        if (x >= lo && x <= hi) oracle_kept.push_back(x);
      }
      CHECK(below == oracle_below);
      CHECK(same_bits(out, oracle_kept));

      std::vector<double> inplace(v);
      std::size_t below_inplace = 0;
      const std::size_t kept_inplace = k.filter_range(inplace.data(), n, lo, hi, inplace.data(), &below_inplace);
      inplace.resize(kept_inplace);
      CHECK(same_bits(inplace, oracle_kept));
      CHECK(below_inplace == oracle_below);

      const double center = 0.1;
      std::vector<double> dev(n), dev_ref(n);
      k.abs_deviation(v.data(), n, center, dev.data());
      scalar().abs_deviation(v.data(), n, center, dev_ref.data());
      CHECK(same_bits(dev, dev_ref));

      std::vector<double> pos(v), pos_ref(n);
      const std::size_t pc = k.positive_deviation(pos.data(), n, center, pos.data());
      const std::size_t pc_ref = scalar().positive_deviation(v.data(), n, center, pos_ref.data());
      REQUIRE(pc == pc_ref);
      pos.resize(pc);
      pos_ref.resize(pc);
      CHECK(same_bits(pos, pos_ref));
    }
  }
}

TEST_CASE("unsupported ISAs are rejected") {
  for (auto isa : {simd::Isa::avx2, simd::Isa::avx512, simd::Isa::neon}) {
    if (!simd::isa_supported(isa)) CHECK_THROWS((void)simd::kernels_for(isa));
  }
}
