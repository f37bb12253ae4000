// Compiled with -mavx2 only (no FMA) so lane arithmetic matches the scalar
// kernels bit for bit.

#include <immintrin.h>

#include "carleman/simd/kernels.hpp"

namespace carleman::simd {

namespace {

void add2(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), s));
  }
  for (; i < n; ++i) out[i] += a[i] + b[i];
}

void add1(double* out, const double* a, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), _mm256_loadu_pd(a + i)));
  for (; i < n; ++i) out[i] += a[i];
}

void axpy(double* out, double s, const double* a, std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(sv, _mm256_loadu_pd(a + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), p));
  }
  for (; i < n; ++i) out[i] += s * a[i];
}

// Two complex numbers per register: [re0 im0 re1 im1].
inline __m256d cmul2(__m256d a, __m256d b) {
  const __m256d a_re = _mm256_movedup_pd(a);
  const __m256d a_im = _mm256_permute_pd(a, 0xF);
  const __m256d b_sw = _mm256_permute_pd(b, 0x5);
  return _mm256_addsub_pd(_mm256_mul_pd(a_re, b), _mm256_mul_pd(a_im, b_sw));
}

void cmul(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2)
    _mm256_storeu_pd(out + 2 * k, cmul2(_mm256_loadu_pd(a + 2 * k), _mm256_loadu_pd(b + 2 * k)));
  for (; k < n; ++k) {
    const double ar = a[2 * k], ai = a[2 * k + 1];
    const double br = b[2 * k], bi = b[2 * k + 1];
    out[2 * k] = ar * br - ai * bi;
    out[2 * k + 1] = ar * bi + ai * br;
  }
}

void cmul_acc(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d p = cmul2(_mm256_loadu_pd(a + 2 * k), _mm256_loadu_pd(b + 2 * k));
    _mm256_storeu_pd(out + 2 * k, _mm256_add_pd(_mm256_loadu_pd(out + 2 * k), p));
  }
  for (; k < n; ++k) {
    const double ar = a[2 * k], ai = a[2 * k + 1];
    const double br = b[2 * k], bi = b[2 * k + 1];
    out[2 * k] += ar * br - ai * bi;
    out[2 * k + 1] += ar * bi + ai * br;
  }
}

void abs2(double* out, const double* a, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d lo = _mm256_loadu_pd(a + 2 * k);      // z0 z1
    const __m256d hi = _mm256_loadu_pd(a + 2 * k + 4);  // z2 z3
    const __m256d sq_lo = _mm256_mul_pd(lo, lo);
    const __m256d sq_hi = _mm256_mul_pd(hi, hi);
    // hadd gives [z0 z2 z1 z3]; reorder lanes to [z0 z1 z2 z3].
    const __m256d h = _mm256_hadd_pd(sq_lo, sq_hi);
    _mm256_storeu_pd(out + k, _mm256_permute4x64_pd(h, 0xD8));
  }
  for (; k < n; ++k) out[k] = a[2 * k] * a[2 * k] + a[2 * k + 1] * a[2 * k + 1];
}

}  // namespace

const KernelTable& avx2_kernels() noexcept {
  static const KernelTable table{Backend::Avx2, add2, add1, axpy, cmul, cmul_acc, abs2};
  return table;
}

}  // namespace carleman::simd
