#include <atomic>

#include "mos/simd/kernels.hpp"

namespace mos::simd {
namespace {

bool cpu_has_avx2() {
#if defined(MOS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<Backend>& active_slot() {
  static std::atomic<Backend> slot{detect()};
  return slot;
}

}  // namespace

std::string_view name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "unknown";
}

Backend detect() { return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar; }

Backend active() { return active_slot().load(std::memory_order_relaxed); }

bool set_active(Backend b) {
  if (b == Backend::Avx2 && !cpu_has_avx2()) return false;
  active_slot().store(b, std::memory_order_relaxed);
  return true;
}

const KernelTable& kernels() {
#if defined(MOS_HAVE_AVX2)
  if (active() == Backend::Avx2) return avx2_kernels();
#endif
  return scalar_kernels();
}

}  // namespace mos::simd
