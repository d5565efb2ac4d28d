#pragma once

// Inner-loop kernels for field-core. Each kernel has a scalar reference
// implementation and, on x86-64, an AVX2 variant chosen at runtime. Both
// variants perform the same IEEE operations in the same order per element,
// so their outputs are bit-identical.

#include <cstddef>
#include <string_view>

namespace mos::simd {

enum class Backend { Scalar, Avx2 };

std::string_view name(Backend b);

/// Best backend supported by the running CPU.
Backend detect();

/// Backend currently used by the dispatching entry points.
Backend active();

/// Forces a backend; returns false (and changes nothing) if unsupported.
bool set_active(Backend b);

struct KernelTable {
  /// out[i] = (f[i+1] - f[i-1]) * inv2h for 1 <= i < n-1.
  void (*central_diff_interior)(const double* f, double* out, std::size_t n,
                                double inv2h);
  /// out[i] = (above[i] - below[i]) * scale for 0 <= i < n.
  void (*row_diff)(const double* above, const double* below, double* out,
                   std::size_t n, double scale);
  /// out[i] = (3 (c[i] - b[i]) - (b[i] - a[i])) * scale, i.e. (3c - 4b + a)
  /// grouped so constants give exactly 0: the one-sided closure, with
  /// (a, b, c) = (f2, f1, f0) and scale = -inv2h for the low edge.
  void (*row_one_sided)(const double* a, const double* b, const double* c,
                        double* out, std::size_t n, double scale);
  /// out[i] = ((5 (f3 - f0) + 10 (f1 - f2)) + (f1 - f4)) * scale, i.e.
  /// -5 f0 + 11 f1 - 10 f2 + 5 f3 - f4: the five-point closure whose leading
  /// error matches the central stencil. f[k] is the k-th row inward from the
  /// edge, scale = +-inv2h.
  void (*row_one_sided5)(const double* const* f, double* out, std::size_t n,
                         double scale);
  /// max |f[i]|; NaN entries are ignored.
  double (*max_abs)(const double* f, std::size_t n);
};

const KernelTable& scalar_kernels();
#if defined(MOS_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif

const KernelTable& kernels();

}  // namespace mos::simd
