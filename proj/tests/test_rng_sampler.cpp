#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "depthforge/direction_sampler.hpp"
#include "depthforge/error.hpp"
#include "depthforge/rng.hpp"

using namespace depthforge;

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> random_unit(std::mt19937_64& gen, std::size_t d) {
  std::normal_distribution<double> normal;
  std::vector<double> v(d);
  for (double& x : v) x = normal(gen);
  const double norm = std::sqrt(dot(v, v));
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("substreams are reproducible and distinct") {
  Substream a = direction_stream(7, 3, 11);
  Substream b = direction_stream(7, 3, 11);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
  std::set<std::uint64_t> firsts;
  for (std::uint64_t j = 0; j < 1000; ++j) firsts.insert(direction_stream(7, 3, j)());
  for (std::uint32_t l = 0; l < 100; ++l) firsts.insert(direction_stream(7, l + 4, 0)());
  firsts.insert(direction_stream(8, 3, 0)());
  firsts.insert(tagged_stream(7, StreamTag::gaussian_rows, 0)());
  CHECK(firsts.size() == 1102);
}

TEST_CASE("random_sphere") {
  Substream s(1, 0, 0);
  SUBCASE("d = 1 gives a sign") {
    for (int i = 0; i < 100; ++i) {
      const auto u = random_sphere(1, s);
      CHECK(std::abs(u[0]) == 1.0);
    }
  }
  SUBCASE("unit norm") {
    for (std::size_t d : {2u, 3u, 10u, 257u}) {
      for (int i = 0; i < 200; ++i) {
        const auto u = random_sphere(d, s);
        CHECK(std::abs(std::sqrt(dot(u, u)) - 1.0) <= 1e-12);
      }
    }
  }
  SUBCASE("d = 0 is rejected") { CHECK_THROWS_AS((void)random_sphere(0, s), Error); }
  SUBCASE("coordinate means are centred") {
    constexpr int draws = 100000;
    double sum[3] = {0, 0, 0};
    for (int i = 0; i < draws; ++i) {
      const auto u = random_sphere(3, s);
      for (int c = 0; c < 3; ++c) sum[c] += u[static_cast<std::size_t>(c)];
    }
    const double sigma = 1.0 / std::sqrt(3.0 * draws);
    for (double v : sum) CHECK(std::abs(v / draws) <= 4 * sigma);
  }
  SUBCASE("angles on the circle pass a chi-square test") {
    constexpr int draws = 100000;
    constexpr int bins = 36;
    std::vector<int> counts(bins, 0);
    for (int i = 0; i < draws; ++i) {
      const auto u = random_sphere(2, s);
      double t = std::atan2(u[1], u[0]) + std::numbers::pi;
      int b = static_cast<int>(t / (2 * std::numbers::pi) * bins);
      counts[static_cast<std::size_t>(std::min(b, bins - 1))]++;
    }
    const double expected = static_cast<double>(draws) / bins;
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    // Upper 0.001 quantile of chi-square with 35 degrees of freedom.
    CHECK(chi2 < 66.62);
  }
}

TEST_CASE("cap sampling") {
  std::mt19937_64 gen(4);
  Substream s(2, 0, 0);
  SUBCASE("membership and norm for random poles and angles") {
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t d = 2 + gen() % 30;
      const Pole pole(random_unit(gen, d));
      const double eps = std::uniform_real_distribution<double>(1e-6, std::numbers::pi / 2)(gen);
      for (int i = 0; i < 50; ++i) {
        const auto u = random_sphere_pole({pole, eps}, s);
        CHECK(std::abs(std::sqrt(dot(u, u)) - 1.0) <= 1e-12);
        CHECK(dot(u, pole.coords()) >= std::cos(eps) - 1e-10);
      }
    }
  }
  SUBCASE("pole e1 keeps the first coordinate in [cos eps, 1]") {
    const double eps = 0.3;
    for (int i = 0; i < 1000; ++i) {
      const auto u = random_sphere_pole({Pole::axis(5), eps}, s);
      CHECK(u[0] >= std::cos(eps));
      CHECK(u[0] <= 1.0);
    }
  }
  SUBCASE("hemisphere around an arbitrary pole") {
    const Pole pole(random_unit(gen, 7));
    for (int i = 0; i < 10000; ++i) {
      const auto u = random_sphere_pole({pole, std::numbers::pi / 2}, s);
      CHECK(dot(u, pole.coords()) >= -1e-12);
    }
  }
  SUBCASE("vanishing cap collapses onto the pole") {
    const Pole pole(random_unit(gen, 4));
    const auto u = random_sphere_pole({pole, 1e-9}, s);
    CHECK(dot(u, pole.coords()) >= 1.0 - 1e-12);
  }
  SUBCASE("antipodal pole") {
    std::vector<double> p(6, 0.0);
    p[0] = -1.0;
    for (int i = 0; i < 500; ++i) {
      const auto u = random_sphere_pole({Pole(p), 0.2}, s);
      CHECK(-u[0] >= std::cos(0.2) - 1e-10);
    }
  }
  SUBCASE("d = 1 returns the pole") {
    const auto u = random_sphere_pole({Pole({-1.0}), 0.5}, s);
    CHECK(u == std::vector<double>{-1.0});
  }
  SUBCASE("invalid caps") {
    CHECK_THROWS_AS((void)random_sphere_pole({Pole::axis(3), 0.0}, s), Error);
    CHECK_THROWS_AS((void)random_sphere_pole({Pole::axis(3), 1.6}, s), Error);
    CHECK_THROWS_AS(Pole({1.0, 1.0}), Error);
  }
}

TEST_CASE("the pole map is an isometry taking e1 to the pole") {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + gen() % 20;
    auto p = random_unit(gen, d);
    if (trial < 2) {
      std::fill(p.begin(), p.end(), 0.0);
      p[0] = trial == 0 ? 1.0 : -1.0;
    }
    std::vector<double> e1(d, 0.0);
    e1[0] = 1.0;
    map_from_axis(p, e1);
    for (std::size_t i = 0; i < d; ++i) CHECK(std::abs(e1[i] - p[i]) <= 1e-12);
    auto a = random_unit(gen, d);
    auto b = random_unit(gen, d);
    const double before = dot(a, b);
    map_from_axis(p, a);
    map_from_axis(p, b);
    CHECK(std::abs(dot(a, b) - before) <= 1e-12);
    CHECK(std::abs(dot(a, a) - 1.0) <= 1e-12);
  }
}

TEST_CASE("batches are keyed, not scheduled") {
  std::mt19937_64 gen(8);
  const CapSpec cap{Pole(random_unit(gen, 12)), std::numbers::pi / 4};
  const DirectionBatch one = generate_batch(cap, 1000, 99, 3, 1);
  const DirectionBatch again = generate_batch(cap, 1000, 99, 3, 1);
  const DirectionBatch eight = generate_batch(cap, 1000, 99, 3, 8);
  CHECK(one.directions == again.directions);
  CHECK(one.directions == eight.directions);
  CHECK(one.seed == 99);
  CHECK(one.refinement == 3);
  for (std::size_t j = 0; j < one.count(); ++j) {
    CHECK(dot(one.directions.row(j), cap.pole.coords()) >= std::cos(cap.epsilon) - 1e-10);
    Substream s = direction_stream(99, 3, j);
    const auto u = random_sphere_pole(cap, s);
    CHECK(std::equal(u.begin(), u.end(), one.directions.row(j).begin()));
  }
  // Prefix property: the first rows do not depend on m.
  const DirectionBatch shorter = generate_batch(cap, 10, 99, 3, 2);
  for (std::size_t j = 0; j < 10; ++j)
    CHECK(std::equal(shorter.directions.row(j).begin(), shorter.directions.row(j).end(), one.directions.row(j).begin()));
  CHECK(generate_batch(cap, 5, 99, 4, 1).directions != generate_batch(cap, 5, 99, 3, 1).directions);
  CHECK_THROWS_AS((void)generate_batch(cap, 0, 99, 3, 1), Error);
}

TEST_CASE("explicit batches must hold unit rows") {
  CHECK_NOTHROW((void)make_batch(Matrix(2, 2, {1, 0, 0, -1})));
  CHECK_THROWS_AS((void)make_batch(Matrix(1, 2, {1, 1})), Error);
}
