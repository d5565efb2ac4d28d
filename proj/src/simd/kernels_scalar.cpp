#include <cmath>

#include "mos/simd/kernels.hpp"

namespace mos::simd {
namespace {

void central_diff_interior(const double* f, double* out, std::size_t n,
                           double inv2h) {
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv2h;
}

void row_diff(const double* above, const double* below, double* out,
              std::size_t n, double scale) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (above[i] - below[i]) * scale;
}

void row_one_sided(const double* a, const double* b, const double* c,
                   double* out, std::size_t n, double scale) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = (3.0 * (c[i] - b[i]) - (b[i] - a[i])) * scale;
}

void row_one_sided5(const double* const* f, double* out, std::size_t n,
                    double scale) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = ((5.0 * (f[3][i] - f[0][i]) + 10.0 * (f[1][i] - f[2][i])) + (f[1][i] - f[4][i])) *
             scale;
}

double max_abs(const double* f, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::fabs(f[i]);
    if (a > m) m = a;
  }
  return m;
}

constexpr KernelTable kTable{central_diff_interior, row_diff, row_one_sided,
                             row_one_sided5, max_abs};

}  // namespace

const KernelTable& scalar_kernels() { return kTable; }

}  // namespace mos::simd
