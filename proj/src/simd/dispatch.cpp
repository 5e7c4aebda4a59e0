#include <cstdlib>
#include <string>

#include "bcx/error.hpp"
#include "bcx/simd.hpp"

namespace bcx::simd {

namespace {

const Kernels kScalarKernels{Level::kScalar, &scalar::radial_sum, &scalar::ursell_batch};

#if defined(__x86_64__) || defined(_M_X64)
const Kernels kAvx2Kernels{Level::kAvx2, &avx2::radial_sum, &avx2::ursell_batch};
#endif

const Kernels& select() {
  if (const char* forced = std::getenv("BCX_SIMD"); forced && std::string(forced) == "scalar")
    return kScalarKernels;
  if (supported(Level::kAvx2)) return kernels(Level::kAvx2);
  return kScalarKernels;
}

}  // namespace

bool supported(Level level) {
  switch (level) {
    case Level::kScalar:
      return true;
    case Level::kAvx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const Kernels& kernels(Level level) {
  if (!supported(level))
    throw CapabilityExceeded("SIMD level " + std::string(name(level)) + " not available");
#if defined(__x86_64__) || defined(_M_X64)
  if (level == Level::kAvx2) return kAvx2Kernels;
#endif
  return kScalarKernels;
}

const Kernels& active() {
  static const Kernels& chosen = select();
  return chosen;
}

std::string_view name(Level level) {
  switch (level) {
    case Level::kScalar:
      return "scalar";
    case Level::kAvx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace bcx::simd
