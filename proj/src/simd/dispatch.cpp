#include "depthforge/simd/dispatch.hpp"

#include <cstdlib>
#include <string>

#include "depthforge/error.hpp"

namespace depthforge::simd {
namespace {

bool cpu_has(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(DEPTHFORGE_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma") && __builtin_cpu_supports("popcnt");
#else
      return false;
#endif
    case Isa::avx512:
#if defined(DEPTHFORGE_HAVE_AVX512)
      return __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("fma") &&
             __builtin_cpu_supports("popcnt");
#else
      return false;
#endif
    case Isa::neon:
#if defined(DEPTHFORGE_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &detail::kScalarKernels;
#if defined(DEPTHFORGE_HAVE_AVX2)
    case Isa::avx2:
      return &detail::kAvx2Kernels;
#endif
#if defined(DEPTHFORGE_HAVE_AVX512)
    case Isa::avx512:
      return &detail::kAvx512Kernels;
#endif
#if defined(DEPTHFORGE_HAVE_NEON)
    case Isa::neon:
      return &detail::kNeonKernels;
#endif
    default:
      return nullptr;
  }
}

const KernelTable& select_active() {
  const std::vector<Isa> isas = supported_isas();
  Isa chosen = isas.back();
  if (const char* forced = std::getenv("DEPTHFORGE_ISA"); forced != nullptr) {
    const std::string name(forced);
    for (Isa isa : isas) {
      if (isa_name(isa) == name) chosen = isa;
    }
  }
  return *table_for(chosen);
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::avx512: return "avx512";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) { return table_for(isa) != nullptr && cpu_has(isa); }

// Ordered from least to most capable.
std::vector<Isa> supported_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::neon, Isa::avx2, Isa::avx512}) {
    if (isa_supported(isa)) out.push_back(isa);
  }
  return out;
}

const KernelTable& kernels_for(Isa isa) {
  require(isa_supported(isa), ErrorKind::invalid_argument,
          "instruction set '" + std::string(isa_name(isa)) + "' is not available on this machine");
  return *table_for(isa);
}

const KernelTable& active_kernels() {
  static const KernelTable& table = select_active();
  return table;
}

}  // namespace depthforge::simd
