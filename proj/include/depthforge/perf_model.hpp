#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "depthforge/timing.hpp"

namespace depthforge {

/// Cost constants of the characteristic-time model, in seconds.
struct CostConstants {
  double c_const = 0.0;  // fixed cost per search
  double c_rv = 0.0;     // per generated scalar
  double c_proj = 0.0;   // per multiply-add of the projection
  double c_depth = 0.0;  // per unit of univariate work
};

struct Workload {
  std::size_t n = 1;
  std::size_t d = 1;
  std::size_t k = 1;
  std::size_t r = 1;
  /// Univariate work per refinement; m * n when unset.
  std::optional<double> depth_work;
  std::size_t g = 1;
  double lambda = 1.0;
  std::size_t d_chunk = 256;

  [[nodiscard]] std::size_t m() const noexcept { return (k + r - 1) / r; }
  [[nodiscard]] double depth_units() const noexcept;
};

void validate(const Workload& w);
void validate(const CostConstants& c);

struct TimingProfile {
  Workload workload;
  PhaseTimes phases;
  ExecPath path = ExecPath::sequential;
};

/// C_c + r (C_rv m d + C_p m n d + C_d D).
[[nodiscard]] double t_sequential(const CostConstants& c, const Workload& w);
/// C_c + r lambda (C_rv ceil(m d / g) + C_p ceil(d / d_chunk) ceil(m n / g) + C_d ceil(D / g)).
[[nodiscard]] double t_parallel(const CostConstants& c, const Workload& w);
[[nodiscard]] double speedup(const CostConstants& c, const Workload& w);
/// (g / lambda) (C_p d + C_d) / (C_p ceil(d / d_chunk) + C_d).
[[nodiscard]] double speedup_plateau(const CostConstants& c, std::size_t d, std::size_t d_chunk, std::size_t g,
                                     double lambda);

/// Per-phase regressors of one profile under its path's model: the factor
/// multiplying C_rv, C_p and C_d respectively.
[[nodiscard]] std::array<double, 3> phase_regressors(const Workload& w, ExecPath path);

struct FitReport {
  CostConstants constants;
  /// Coefficient of determination of the modelled total time.
  double r_squared = 0.0;
  /// Same, per phase (generation, projection, univariate).
  std::array<double, 3> phase_r_squared{};
  /// (predicted - measured) / measured total, per profile.
  std::vector<double> residuals;
  double max_relative_residual = 0.0;
  std::size_t profile_count = 0;
};

/// Non-negative least squares of each phase time on intercept + regressor.
/// The constant C_c collects the three intercepts plus the mean time outside
/// the phases. Throws rank_deficient when a phase design has rank < 2.
[[nodiscard]] FitReport fit_constants(const std::vector<TimingProfile>& profiles);

[[nodiscard]] std::string fit_report_json(const FitReport& report);

/// Ratio of single-worker throughput to per-worker throughput with `workers`
/// threads on a projection kernel; 1 means perfect scaling.
[[nodiscard]] double calibrate_lambda(std::size_t workers);

}  // namespace depthforge
