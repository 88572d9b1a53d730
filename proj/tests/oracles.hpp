#pragma once
// Brute-force reference implementations. Deliberately independent of the
// library: full sorts instead of selection, pair enumeration instead of merge
// counting, plain loops instead of tiles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline double sorted_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return std::midpoint(v[n / 2 - 1], v[n / 2]);
}

inline double halfspace(const std::vector<double>& v, double q) {
  std::size_t le = 0;
  for (double x : v) le += x <= q ? 1 : 0;
  std::size_t ge = 0;
  for (double x : v) ge += x >= q ? 1 : 0;
  return static_cast<double>(std::min(le, ge)) / static_cast<double>(v.size());
}

inline double projection(const std::vector<double>& v, double q) {
  const double med = sorted_median(v);
  std::vector<double> dev;
  for (double x : v) dev.push_back(std::abs(x - med));
  const double mad = sorted_median(dev);
  if (q == med) return 1.0;
  if (mad == 0.0) return 0.0;
  return 1.0 / (1.0 + std::abs(q - med) / mad);
}

inline double asym_projection(const std::vector<double>& v, double q) {
  const double med = sorted_median(v);
  if (q <= med) return 1.0;
  std::vector<double> dev;
  for (double x : v)
    if (x > med) dev.push_back(x - med);
  if (dev.empty()) return 0.0;
  return 1.0 / (1.0 + (q - med) / sorted_median(dev));
}

/// Exact bivariate halfspace depth of z. The closed-halfspace count only
/// changes at directions orthogonal to some x_i - z, so its minimum is attained
/// strictly between two consecutive critical angles.
inline double halfspace_2d(const std::vector<double>& xy, double zx, double zy) {
  const std::size_t n = xy.size() / 2;
  std::vector<double> angles;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xy[2 * i] - zx;
    const double dy = xy[2 * i + 1] - zy;
    if (dx == 0.0 && dy == 0.0) continue;
    const double a = std::atan2(dy, dx);
    for (double c : {a + std::numbers::pi / 2, a - std::numbers::pi / 2}) {
      double w = std::fmod(c, 2 * std::numbers::pi);
      if (w < 0) w += 2 * std::numbers::pi;
      angles.push_back(w);
    }
  }
  if (angles.empty()) return 1.0;
  std::sort(angles.begin(), angles.end());
  std::size_t best = n;
  for (std::size_t j = 0; j < angles.size(); ++j) {
    const double next = j + 1 < angles.size() ? angles[j + 1] : angles[0] + 2 * std::numbers::pi;
    if (next - angles[j] < 1e-15) continue;
    const double t = 0.5 * (angles[j] + next);
    const double ux = std::cos(t);
    const double uy = std::sin(t);
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = ux * (xy[2 * i] - zx) + uy * (xy[2 * i + 1] - zy);
      count += s >= 0.0 ? 1 : 0;
    }
    best = std::min(best, count);
  }
  return static_cast<double>(best) / static_cast<double>(n);
}

/// Scores as the in-order fma chain over coordinates; x is n x d row-major,
/// u is m x d, result is m x n.
inline std::vector<double> project(const std::vector<double>& x, std::size_t n, const std::vector<double>& u,
                                   std::size_t m, std::size_t d) {
  std::vector<double> out(m * n);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t l = 0; l < d; ++l) acc = std::fma(u[j * d + l], x[i * d + l], acc);
      out[j * n + i] = acc;
    }
  return out;
}

/// Average ranks by counting: 1 + #smaller + (#equal - 1) / 2.
inline std::vector<double> ranks(const std::vector<double>& a) {
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t less = 0;
    std::size_t equal = 0;
    for (double b : a) {
      less += b < a[i] ? 1 : 0;
      equal += b == a[i] ? 1 : 0;
    }
    r[i] = 1.0 + static_cast<double>(less) + 0.5 * static_cast<double>(equal - 1);
  }
  return r;
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = ranks(a);
  const auto rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

/// Tau-b by enumerating all pairs.
inline double kendall(const std::vector<double>& a, const std::vector<double>& b) {
  std::int64_t concordant = 0;
  std::int64_t discordant = 0;
  std::int64_t tied_a = 0;
  std::int64_t tied_b = 0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool ta = a[i] == a[j];
      const bool tb = b[i] == b[j];
      if (ta) ++tied_a;
      if (tb) ++tied_b;
      if (ta || tb) continue;
      if ((a[i] < a[j]) == (b[i] < b[j]))
        ++concordant;
      else
        ++discordant;
    }
  const std::int64_t pairs = static_cast<std::int64_t>(n * (n - 1) / 2);
  return static_cast<double>(concordant - discordant) /
         std::sqrt(static_cast<double>(pairs - tied_a) * static_cast<double>(pairs - tied_b));
}

/// (z - mu)^T S^{-1} (z - mu) for 2 x 2 S by the explicit inverse.
inline double quadratic_form_2x2(double s11, double s12, double s22, double z1, double z2) {
  const double det = s11 * s22 - s12 * s12;
  return (s22 * z1 * z1 - 2 * s12 * z1 * z2 + s11 * z2 * z2) / det;
}

inline std::vector<double> gaussian_values(std::size_t count, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> v(count);
  for (double& x : v) x = normal(gen);
  return v;
}

}  // namespace oracle
