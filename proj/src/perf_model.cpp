#include "depthforge/perf_model.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "depthforge/error.hpp"
#include "depthforge/projection_engine.hpp"
#include "depthforge/rng.hpp"
#include "depthforge/simd/dispatch.hpp"

namespace depthforge {

namespace {

double ceil_div(std::size_t a, std::size_t b) { return static_cast<double>((a + b - 1) / b); }

constexpr std::array<const char*, 3> kPhaseNames{"generation", "projection", "univariate"};
constexpr std::array<const char*, 3> kConstantNames{"C_rv", "C_p", "C_d"};

struct LineFit {
  double intercept;
  double slope;
};

double weighted_sse(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w,
                    LineFit f) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - f.intercept - f.slope * x[i];
    total += w[i] * e * e;
  }
  return total;
}

// Timing noise is roughly proportional to the time measured, so residuals are
// weighted by 1 / y^2 (relative error). Zero times borrow the smallest
// positive time as their scale.
std::vector<double> relative_weights(const std::vector<double>& y) {
  double floor = 0.0;
  for (double v : y)
    if (v > 0.0 && (floor == 0.0 || v < floor)) floor = v;
  if (floor == 0.0) floor = 1.0;
  std::vector<double> w(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double s = std::max(y[i], floor);
    w[i] = 1.0 / (s * s);
  }
  return w;
}

// Weighted least squares of y on [1, x] with both coefficients constrained
// >= 0. With two unknowns the optimum is the unconstrained solution or lies on
// one of the faces a = 0, b = 0.
LineFit nonnegative_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::vector<double> w = relative_weights(y);
  double sw = 0.0;
  double swx = 0.0;
  double swy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
  }
  const double mx = swx / sw;
  const double my = swy / sw;
  double sxx = 0.0;
  double sxy = 0.0;
  double xx = 0.0;
  double xy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
    xx += w[i] * x[i] * x[i];
    xy += w[i] * x[i] * y[i];
  }
  const double b = sxy / sxx;
  const LineFit free{my - b * mx, b};
  if (free.intercept >= 0.0 && free.slope >= 0.0) return free;

  const LineFit candidates[] = {
      {0.0, xx > 0.0 ? std::max(0.0, xy / xx) : 0.0},
      {std::max(0.0, my), 0.0},
  };
  LineFit best{0.0, 0.0};
  double best_sse = weighted_sse(x, y, w, best);
  for (const LineFit& c : candidates) {
    const double e = weighted_sse(x, y, w, c);
    if (e < best_sse) {
      best = c;
      best_sse = e;
    }
  }
  return best;
}

double r_squared(const std::vector<double>& measured, const std::vector<double>& predicted) {
  const double mean = std::accumulate(measured.begin(), measured.end(), 0.0) / static_cast<double>(measured.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    ss_res += (measured[i] - predicted[i]) * (measured[i] - predicted[i]);
    ss_tot += (measured[i] - mean) * (measured[i] - mean);
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

}  // namespace

std::string_view path_name(ExecPath path) { return path == ExecPath::sequential ? "sequential" : "parallel"; }

ExecPath parse_path(std::string_view text) {
  if (text == "sequential") return ExecPath::sequential;
  if (text == "parallel") return ExecPath::parallel;
  fail(ErrorKind::invalid_argument, "unknown execution path '" + std::string(text) + "'");
}

double Workload::depth_units() const noexcept {
  return depth_work ? *depth_work : static_cast<double>(m()) * static_cast<double>(n);
}

void validate(const Workload& w) {
  require(w.n >= 1 && w.d >= 1 && w.k >= 1 && w.r >= 1 && w.g >= 1 && w.d_chunk >= 1, ErrorKind::invalid_argument,
          "workload sizes must be positive");
  require(w.lambda > 0.0 && std::isfinite(w.lambda), ErrorKind::invalid_argument, "lambda must be positive");
  require(!w.depth_work || (*w.depth_work >= 0.0 && std::isfinite(*w.depth_work)), ErrorKind::invalid_argument,
          "depth work must be non-negative");
}

void validate(const CostConstants& c) {
  for (double v : {c.c_const, c.c_rv, c.c_proj, c.c_depth})
    require(v >= 0.0 && std::isfinite(v), ErrorKind::invalid_argument, "cost constants must be non-negative");
}

double t_sequential(const CostConstants& c, const Workload& w) {
  const double m = static_cast<double>(w.m());
  const double n = static_cast<double>(w.n);
  const double d = static_cast<double>(w.d);
  return c.c_const + static_cast<double>(w.r) * (c.c_rv * m * d + c.c_proj * m * n * d + c.c_depth * w.depth_units());
}

double t_parallel(const CostConstants& c, const Workload& w) {
  const std::size_t m = w.m();
  const double bracket = c.c_rv * ceil_div(m * w.d, w.g) + c.c_proj * ceil_div(w.d, w.d_chunk) * ceil_div(m * w.n, w.g) +
                         c.c_depth * std::ceil(w.depth_units() / static_cast<double>(w.g));
  return c.c_const + static_cast<double>(w.r) * w.lambda * bracket;
}

double speedup(const CostConstants& c, const Workload& w) {
  const double parallel = t_parallel(c, w);
  require(parallel > 0.0, ErrorKind::numerical, "parallel time is zero");
  return t_sequential(c, w) / parallel;
}

double speedup_plateau(const CostConstants& c, std::size_t d, std::size_t d_chunk, std::size_t g, double lambda) {
  const double denominator = c.c_proj * ceil_div(d, d_chunk) + c.c_depth;
  require(denominator > 0.0, ErrorKind::numerical, "plateau undefined: projection and depth costs are both zero");
  return static_cast<double>(g) / lambda * (c.c_proj * static_cast<double>(d) + c.c_depth) / denominator;
}

std::array<double, 3> phase_regressors(const Workload& w, ExecPath path) {
  const std::size_t m = w.m();
  const double r = static_cast<double>(w.r);
  if (path == ExecPath::sequential) {
    const double md = static_cast<double>(m) * static_cast<double>(w.d);
    return {r * md, r * md * static_cast<double>(w.n), r * w.depth_units()};
  }
  const double scale = r * w.lambda;
  return {scale * ceil_div(m * w.d, w.g), scale * ceil_div(w.d, w.d_chunk) * ceil_div(m * w.n, w.g),
          scale * std::ceil(w.depth_units() / static_cast<double>(w.g))};
}

FitReport fit_constants(const std::vector<TimingProfile>& profiles) {
  const std::size_t count = profiles.size();
  std::array<std::vector<double>, 3> x;
  std::array<std::vector<double>, 3> y;
  std::vector<double> remainder;
  std::vector<double> totals;
  for (const TimingProfile& p : profiles) {
    validate(p.workload);
    const auto reg = phase_regressors(p.workload, p.path);
    const double phases[3] = {p.phases.generation, p.phases.projection, p.phases.univariate};
    for (int k = 0; k < 3; ++k) {
      require(phases[k] >= 0.0 && std::isfinite(phases[k]), ErrorKind::malformed_data, "phase times must be >= 0");
      x[k].push_back(reg[k]);
      y[k].push_back(phases[k]);
    }
    remainder.push_back(p.phases.total - (phases[0] + phases[1] + phases[2]));
    totals.push_back(p.phases.total);
  }

  for (int k = 0; k < 3; ++k) {
    bool varies = false;
    if (count >= 2) {
      const auto [lo, hi] = std::minmax_element(x[k].begin(), x[k].end());
      varies = *hi - *lo > 1e-12 * std::max(std::abs(*lo), std::abs(*hi));
    }
    require(varies, ErrorKind::rank_deficient,
            std::string("rank-deficient design: regressor ") + kConstantNames[k] + " (" + kPhaseNames[k] +
                ") is constant across profiles");
  }
  require(count >= 4, ErrorKind::rank_deficient, "at least 4 profiles are required to fit the model");

  FitReport report;
  report.profile_count = count;
  double intercepts = 0.0;
  double* slopes[3] = {&report.constants.c_rv, &report.constants.c_proj, &report.constants.c_depth};
  for (int k = 0; k < 3; ++k) {
    const LineFit f = nonnegative_line(x[k], y[k]);
    intercepts += f.intercept;
    *slopes[k] = f.slope;
    std::vector<double> predicted(count);
    for (std::size_t i = 0; i < count; ++i) predicted[i] = f.intercept + f.slope * x[k][i];
    report.phase_r_squared[static_cast<std::size_t>(k)] = r_squared(y[k], predicted);
  }
  const double outside = std::accumulate(remainder.begin(), remainder.end(), 0.0) / static_cast<double>(count);
  report.constants.c_const = intercepts + std::max(0.0, outside);

  std::vector<double> predicted(count);
  for (std::size_t i = 0; i < count; ++i) {
    const TimingProfile& p = profiles[i];
    predicted[i] = p.path == ExecPath::sequential ? t_sequential(report.constants, p.workload)
                                                  : t_parallel(report.constants, p.workload);
    const double rel = totals[i] > 0.0 ? (predicted[i] - totals[i]) / totals[i] : 0.0;
    report.residuals.push_back(rel);
    report.max_relative_residual = std::max(report.max_relative_residual, std::abs(rel));
  }
  report.r_squared = r_squared(totals, predicted);
  return report;
}

std::string fit_report_json(const FitReport& report) {
  nlohmann::ordered_json j;
  j["constants"] = {{"c_const", report.constants.c_const},
                    {"c_rv", report.constants.c_rv},
                    {"c_proj", report.constants.c_proj},
                    {"c_depth", report.constants.c_depth}};
  j["r_squared"] = report.r_squared;
  j["phase_r_squared"] = {{"generation", report.phase_r_squared[0]},
                          {"projection", report.phase_r_squared[1]},
                          {"univariate", report.phase_r_squared[2]}};
  j["residuals"] = report.residuals;
  j["max_relative_residual"] = report.max_relative_residual;
  j["profile_count"] = report.profile_count;
  return j.dump(2);
}

double calibrate_lambda(std::size_t workers) {
  require(workers >= 1, ErrorKind::invalid_argument, "workers must be at least 1");
  constexpr std::size_t n = 2048;
  constexpr std::size_t d = 64;
  constexpr std::size_t m = 128;
  std::vector<double> values(n * d);
  Substream stream(0x1ab3dULL, 0, 0);
  for (double& v : values) v = static_cast<double>(stream() >> 11) * 0x1.0p-53 - 0.5;
  const PackedDataset packed(Dataset(n, d, std::move(values)));
  Matrix directions(m * workers, d);
  for (double& v : directions.values()) v = static_cast<double>(stream() >> 11) * 0x1.0p-53 - 0.5;
  std::vector<double> out(m * workers * n);
  const auto& kernels = simd::active_kernels();

  auto time_rows = [&](std::size_t rows, std::size_t threads) {
    ParallelConfig cfg;
    cfg.workers = threads;
    std::vector<double> samples;
    for (int rep = 0; rep < 5; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      project_rows(packed, directions, 0, rows, out.data(), cfg, kernels);
      samples.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    std::nth_element(samples.begin(), samples.begin() + 2, samples.end());
    return samples[2];
  };
  const double single = time_rows(m, 1);
  const double many = time_rows(m * workers, workers);
  return many / single;
}

}  // namespace depthforge
