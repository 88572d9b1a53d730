#pragma once

#include <string_view>

namespace depthforge {

enum class ExecPath { sequential, parallel };

[[nodiscard]] std::string_view path_name(ExecPath path);
/// Accepts "sequential" and "parallel".
[[nodiscard]] ExecPath parse_path(std::string_view text);

/// Wall-clock seconds spent in each phase of a search.
struct PhaseTimes {
  double generation = 0.0;
  double projection = 0.0;
  double univariate = 0.0;
  double total = 0.0;
};

}  // namespace depthforge
