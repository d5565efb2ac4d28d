// Compiled with -mavx2 only (no FMA contraction) so results match the scalar
// reference bit for bit.

#include <immintrin.h>

#include <cmath>

#include "mos/simd/kernels.hpp"

namespace mos::simd {
namespace {

void central_diff_interior(const double* f, double* out, std::size_t n,
                           double inv2h) {
  if (n < 3) return;
  const __m256d s = _mm256_set1_pd(inv2h);
  std::size_t i = 1;
  for (; i + 4 < n; i += 4) {
    const __m256d hi = _mm256_loadu_pd(f + i + 1);
    const __m256d lo = _mm256_loadu_pd(f + i - 1);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_sub_pd(hi, lo), s));
  }
  for (; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv2h;
}

void row_diff(const double* above, const double* below, double* out,
              std::size_t n, double scale) {
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(above + i);
    const __m256d b = _mm256_loadu_pd(below + i);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_sub_pd(a, b), s));
  }
  for (; i < n; ++i) out[i] = (above[i] - below[i]) * scale;
}

void row_one_sided(const double* a, const double* b, const double* c,
                   double* out, std::size_t n, double scale) {
  const __m256d s = _mm256_set1_pd(scale);
  const __m256d three = _mm256_set1_pd(3.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    const __m256d vc = _mm256_loadu_pd(c + i);
    const __m256d t = _mm256_sub_pd(_mm256_mul_pd(three, _mm256_sub_pd(vc, vb)),
                                    _mm256_sub_pd(vb, va));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(t, s));
  }
  for (; i < n; ++i) out[i] = (3.0 * (c[i] - b[i]) - (b[i] - a[i])) * scale;
}

void row_one_sided5(const double* const* f, double* out, std::size_t n,
                    double scale) {
  const __m256d s = _mm256_set1_pd(scale);
  const __m256d five = _mm256_set1_pd(5.0), ten = _mm256_set1_pd(10.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(f[0] + i), v1 = _mm256_loadu_pd(f[1] + i);
    const __m256d v2 = _mm256_loadu_pd(f[2] + i), v3 = _mm256_loadu_pd(f[3] + i);
    const __m256d v4 = _mm256_loadu_pd(f[4] + i);
    __m256d t = _mm256_add_pd(_mm256_mul_pd(five, _mm256_sub_pd(v3, v0)),
                              _mm256_mul_pd(ten, _mm256_sub_pd(v1, v2)));
    t = _mm256_add_pd(t, _mm256_sub_pd(v1, v4));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(t, s));
  }
  for (; i < n; ++i)
    out[i] = ((5.0 * (f[3][i] - f[0][i]) + 10.0 * (f[1][i] - f[2][i])) + (f[1][i] - f[4][i])) *
             scale;
}

double max_abs(const double* f, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_andnot_pd(sign, _mm256_loadu_pd(f + i));
    // maxpd returns the second operand when either is NaN.
    m = _mm256_max_pd(a, m);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = 0.0;
  for (double v : lanes)
    if (v > r) r = v;
  for (; i < n; ++i) {
    const double a = std::fabs(f[i]);
    if (a > r) r = a;
  }
  return r;
}

constexpr KernelTable kTable{central_diff_interior, row_diff, row_one_sided,
                             row_one_sided5, max_abs};

}  // namespace

const KernelTable& avx2_kernels() { return kTable; }

}  // namespace mos::simd
