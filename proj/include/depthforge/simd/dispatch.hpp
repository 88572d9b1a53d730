#pragma once

#include <string_view>
#include <vector>

#include "depthforge/simd/kernels.hpp"

namespace depthforge::simd {

/// Table for the best ISA the running CPU supports, or the one forced through
/// the DEPTHFORGE_ISA environment variable (clamped to what is supported).
const KernelTable& active_kernels();

/// Table for a specific ISA. Throws if the CPU or the build does not support it.
const KernelTable& kernels_for(Isa isa);

[[nodiscard]] bool isa_supported(Isa isa);
[[nodiscard]] std::vector<Isa> supported_isas();
[[nodiscard]] std::string_view isa_name(Isa isa);

}  // namespace depthforge::simd
