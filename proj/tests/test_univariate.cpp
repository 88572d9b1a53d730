#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "depthforge/error.hpp"
#include "depthforge/simd/dispatch.hpp"
#include "depthforge/univariate_depth.hpp"
#include "oracles.hpp"

using namespace depthforge;

namespace {

double hd(std::vector<double> v, double q) { return halfspace_depth_1d({v, q}); }
double pd(std::vector<double> v, double q) { return projection_depth_1d({v, q}); }
double apd(std::vector<double> v, double q) { return asym_projection_depth_1d({v, q}); }

std::vector<double> integer_sample(std::mt19937_64& gen, std::size_t n, int range) {
  std::uniform_int_distribution<int> pick(-range, range);
  std::vector<double> v(n);
  for (double& x : v) x = pick(gen);
  return v;
}

}  // namespace

TEST_CASE("halfspace depth hand cases") {
  CHECK(hd({1, 2, 3, 4, 5}, 3) == 3.0 / 5);
  CHECK(hd({1, 2, 3}, 0) == 0.0);
  CHECK(hd({1, 1, 2}, 1) == 2.0 / 3.0);
  CHECK(hd({7}, 7) == 1.0);
}

TEST_CASE("projection depth hand cases") {
  CHECK(pd({1, 2, 3, 4, 5}, 3) == 1.0);
  CHECK(pd({1, 2, 3, 4, 5}, 5) == 1.0 / 3.0);
  CHECK(pd({1, 2, 3, 4, 5}, 4) == 0.5);
  // Even n: median is the midpoint 2.5, deviations {1.5, .5, .5, 1.5}, MAD 1.
  CHECK(pd({1, 2, 3, 4}, 4.5) == doctest::Approx(1.0 / 3.0));
  // MAD = 0.
  CHECK(pd({2, 2, 2, 9}, 2) == 1.0);
  CHECK(pd({2, 2, 2, 9}, 3) == 0.0);
}

TEST_CASE("asymmetric projection depth hand cases") {
  CHECK(apd({1, 2, 3, 4, 5}, 5) == doctest::Approx(3.0 / 7.0).epsilon(1e-15));
  CHECK(apd({1, 2, 3, 4, 5}, 3) == 1.0);
  CHECK(apd({1, 2, 3, 4, 5}, -100) == 1.0);
  // Nothing strictly above the median.
  CHECK(apd({1, 4, 4, 4}, 4) == 1.0);
  CHECK(apd({1, 4, 4, 4}, 5) == 0.0);
}

TEST_CASE("empty and non-finite samples are rejected") {
  std::vector<double> empty;
  CHECK_THROWS_WITH_AS((void)halfspace_depth_1d({empty, 0.0}), doctest::Contains("empty projection"), Error);
  CHECK_THROWS_AS((void)projection_depth_1d({empty, 0.0}), Error);
  CHECK_THROWS_AS((void)asym_projection_depth_1d({empty, 0.0}), Error);
  std::vector<double> bad{1.0, NAN};
  CHECK_THROWS_AS((void)projection_depth_1d({bad, 0.0}), Error);
}

TEST_CASE("median selection matches a full sort") {
  std::mt19937_64 gen(3);
  for (std::size_t n : {1u, 2u, 3u, 10u, 511u, 512u, 513u, 1000u, 4096u, 20001u}) {
    auto v = oracle::gaussian_values(n, gen());
    CHECK(median(v) == oracle::sorted_median(v));
    auto ints = integer_sample(gen, n, 3);
    CHECK(median(ints) == oracle::sorted_median(ints));
  }
  // Adversarial: all equal, sorted, reverse sorted.
  std::vector<double> flat(5000, 1.25);
  CHECK(median(flat) == 1.25);
  std::vector<double> up(6000);
  for (std::size_t i = 0; i < up.size(); ++i) up[i] = static_cast<double>(i);
  CHECK(median(up) == 2999.5);
  std::vector<double> down(up.rbegin(), up.rend());
  CHECK(median(down) == 2999.5);
}

TEST_CASE("median over every short length and awkward shape") {
  std::mt19937_64 gen(9);
  for (std::size_t n = 1; n <= 700; ++n) {
    std::vector<double> pipe(n);
    for (std::size_t i = 0; i < n; ++i) pipe[i] = static_cast<double>(std::min(i, n - 1 - i));
    CHECK(median(pipe) == oracle::sorted_median(pipe));
    auto two = integer_sample(gen, n, 1);
    CHECK(median(two) == oracle::sorted_median(two));
    auto v = oracle::gaussian_values(n, gen());
    CHECK(median(v) == oracle::sorted_median(v));
  }
}

TEST_CASE("univariate depths agree with the sort-based oracles") {
  std::mt19937_64 gen(11);
  const auto& kernels = simd::active_kernels();
  SelectionScratch scratch;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + gen() % 3000;
    std::vector<double> v = trial % 3 == 0 ? integer_sample(gen, n, 5) : oracle::gaussian_values(n, gen());
    const double q = trial % 5 == 0 ? v[gen() % n] : std::normal_distribution<double>(0, 2)(gen);
    const ProjectedSample s{v, q};
    CHECK(halfspace_depth_1d(s) == oracle::halfspace(v, q));
    CHECK(projection_depth_1d(s) == doctest::Approx(oracle::projection(v, q)).epsilon(1e-12));
    CHECK(asym_projection_depth_1d(s) == doctest::Approx(oracle::asym_projection(v, q)).epsilon(1e-12));
    CHECK(univariate_depth(DepthNotion::projection, v, q, kernels, scratch) == projection_depth_1d(s));
  }
}

TEST_CASE("reflection and affine invariance") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> coef(-3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + gen() % 400;
    auto v = oracle::gaussian_values(n, gen());
    const double q = coef(gen);
    std::vector<double> neg(v);
    for (double& x : neg) x = -x;
    CHECK(hd(v, q) == hd(neg, -q));
    CHECK(pd(v, q) == doctest::Approx(pd(neg, -q)).epsilon(1e-12));

    // Powers of two keep the map exact so the halfspace counts cannot move.
    const double a = std::ldexp(1.0, static_cast<int>(gen() % 7) - 3) * (trial % 2 == 0 ? 1 : -1);
    const double b = std::round(coef(gen) * 8) / 8;
    std::vector<double> w(v);
    for (double& x : w) x = a * x + b;
    CHECK(hd(w, a * q + b) == hd(v, q));

    const double pos = std::abs(coef(gen)) + 0.1;
    std::vector<double> p(v);
    for (double& x : p) x = pos * x + b;
    CHECK(pd(p, pos * q + b) == doctest::Approx(pd(v, q)).epsilon(1e-9));
    CHECK(apd(p, pos * q + b) == doctest::Approx(apd(v, q)).epsilon(1e-9));
  }
}

TEST_CASE("halfspace depth is zero exactly outside the range") {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 200; ++trial) {
    auto v = integer_sample(gen, 1 + gen() % 50, 10);
    const double q = static_cast<double>(static_cast<int>(gen() % 31) - 15);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    CHECK((hd(v, q) == 0.0) == (q < *lo || q > *hi));
  }
}

TEST_CASE("projection depth does not increase away from the median") {
  auto v = oracle::gaussian_values(501, 17);
  const double med = oracle::sorted_median(v);
  double last_up = 1.0;
  double last_down = 1.0;
  for (double dist = 0.0; dist < 5.0; dist += 0.01) {
    const double up = pd(v, med + dist);
    const double down = pd(v, med - dist);
    CHECK(up <= last_up);
    CHECK(down <= last_down);
    CHECK(up > 0.0);
    last_up = up;
    last_down = down;
  }
}

TEST_CASE("Mahalanobis depth") {
  SUBCASE("query at the location") {
    LocationScatter est({1.0, -2.0}, Matrix(2, 2, {2.0, 0.3, 0.3, 1.0}));
    CHECK(mahalanobis_depth(std::vector<double>{1.0, -2.0}, est) == 1.0);
  }
  SUBCASE("identity scatter") {
    LocationScatter est({0.0, 0.0, 0.0}, Matrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
    CHECK(mahalanobis_depth(std::vector<double>{0.6, 0.8, 0.0}, est) == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("correlated 2 x 2") {
    LocationScatter est({0.0, 0.0}, Matrix(2, 2, {1.0, 0.5, 0.5, 1.0}));
    const double form = oracle::quadratic_form_2x2(1.0, 0.5, 1.0, 1.0, 1.0);
    CHECK(form == doctest::Approx(4.0 / 3.0));
    CHECK(mahalanobis_depth(std::vector<double>{1.0, 1.0}, est) == doctest::Approx(3.0 / 7.0).epsilon(1e-14));
  }
  SUBCASE("singular and asymmetric scatter") {
    CHECK_THROWS_WITH_AS(LocationScatter({0.0, 0.0}, Matrix(2, 2, {1.0, 1.0, 1.0, 1.0})),
                         doctest::Contains("scatter not positive definite"), Error);
    CHECK_THROWS_AS(LocationScatter({0.0, 0.0}, Matrix(2, 2, {1.0, 0.2, 0.1, 1.0})), Error);
  }
  SUBCASE("dimension mismatch") {
    LocationScatter est({0.0, 0.0}, Matrix(2, 2, {1.0, 0.0, 0.0, 1.0}));
    CHECK_THROWS_AS((void)mahalanobis_depth(std::vector<double>{1.0}, est), Error);
  }
}

TEST_CASE("Mahalanobis depth is affine invariant") {
  std::mt19937_64 gen(21);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + gen() % 5;
    Matrix b(d, d);
    for (double& x : b.values()) x = normal(gen);
    Matrix sigma(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        double s = i == j ? 0.5 : 0.0;
        for (std::size_t l = 0; l < d; ++l) s += b(i, l) * b(j, l);
        sigma(i, j) = s;
      }
    Matrix a(d, d);
    for (double& x : a.values()) x = normal(gen);
    for (std::size_t i = 0; i < d; ++i) a(i, i) += 3.0;
    std::vector<double> mu(d), z(d), shift(d);
    for (std::size_t i = 0; i < d; ++i) {
      mu[i] = normal(gen);
      z[i] = normal(gen);
      shift[i] = normal(gen);
    }
    auto apply = [&](const std::vector<double>& v) {
      std::vector<double> out(d);
      for (std::size_t i = 0; i < d; ++i) {
        out[i] = shift[i];
        for (std::size_t l = 0; l < d; ++l) out[i] += a(i, l) * v[l];
      }
      return out;
    };
    Matrix mapped(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t p = 0; p < d; ++p)
          for (std::size_t q = 0; q < d; ++q) s += a(i, p) * sigma(p, q) * a(j, q);
        mapped(i, j) = s;
      }
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < i; ++j) mapped(i, j) = mapped(j, i);
    const double before = mahalanobis_depth(z, LocationScatter(mu, sigma));
    const double after = mahalanobis_depth(apply(z), LocationScatter(apply(mu), mapped));
    CHECK(after == doctest::Approx(before).epsilon(1e-9));
  }
}

TEST_CASE("maximum-likelihood location and scatter") {
  SUBCASE("two symmetric points") {
    const LocationScatter est = estimate_mle(Dataset(2, 1, {-1.5, 1.5}));
    CHECK(est.location()[0] == 0.0);
    CHECK(est.scatter()(0, 0) == 2.25);
  }
  SUBCASE("three points in the plane") {
    // Mean (1, 1); centred rows (-1, -1), (1, -1), (0, 2).
    const LocationScatter est = estimate_mle(Dataset(3, 2, {0, 0, 2, 0, 1, 3}));
    CHECK(est.location()[0] == doctest::Approx(1.0));
    CHECK(est.location()[1] == doctest::Approx(1.0));
    CHECK(est.scatter()(0, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(est.scatter()(0, 1) == doctest::Approx(0.0));
    CHECK(est.scatter()(1, 1) == doctest::Approx(2.0));
  }
  SUBCASE("query at the mean has depth one") {
    const Dataset data(4, 2, {0.5, 1, 2, -1, 3, 0.25, -1, 4});
    const LocationScatter est = estimate_mle(data);
    const std::vector<double> mean{1.125, 1.0625};
    CHECK(mahalanobis_depth(mean, est) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("degenerate inputs") {
    CHECK_THROWS_AS((void)estimate_mle(Dataset(1, 2, {1, 2})), Error);
    CHECK_THROWS_AS((void)estimate_mle(Dataset(3, 2, {1, 2, 1, 2, 1, 2})), Error);
  }
}

TEST_CASE("notion names") {
  CHECK(parse_notion("asymprojection") == DepthNotion::asym_projection);
  CHECK(parse_notion("asym_projection") == DepthNotion::asym_projection);
  CHECK(notion_name(DepthNotion::halfspace) == "halfspace");
  CHECK_THROWS_AS((void)parse_notion("zonoid"), Error);
}
