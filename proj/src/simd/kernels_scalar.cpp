#include "carleman/simd/kernels.hpp"

namespace carleman::simd {

namespace {

void add2(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += a[i] + b[i];
}

void add1(double* out, const double* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += a[i];
}

void axpy(double* out, double s, const double* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += s * a[i];
}

void cmul(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = a[2 * k], ai = a[2 * k + 1];
    const double br = b[2 * k], bi = b[2 * k + 1];
    out[2 * k] = ar * br - ai * bi;
    out[2 * k + 1] = ar * bi + ai * br;
  }
}

void cmul_acc(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = a[2 * k], ai = a[2 * k + 1];
    const double br = b[2 * k], bi = b[2 * k + 1];
    out[2 * k] += ar * br - ai * bi;
    out[2 * k + 1] += ar * bi + ai * br;
  }
}

void abs2(double* out, const double* a, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = a[2 * k] * a[2 * k] + a[2 * k + 1] * a[2 * k + 1];
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{Backend::Scalar, add2, add1, axpy, cmul, cmul_acc, abs2};
  return table;
}

}  // namespace carleman::simd
