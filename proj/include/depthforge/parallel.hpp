#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace depthforge {

/// Worker count from (in order of precedence) an explicit value, the
/// DEPTHFORGE_WORKERS environment variable, or the hardware concurrency.
[[nodiscard]] std::size_t resolve_workers(std::optional<std::size_t> requested = std::nullopt);

/// Runs body(begin, end) over [0, count) in chunks of `grain`, on at most
/// `workers` threads. Chunks are claimed dynamically; callers must not depend
/// on which thread runs which chunk. The first exception thrown by any chunk is
/// rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t workers, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace depthforge
