#pragma once

#include <cstddef>
#include <string_view>

// Elementwise kernels behind the lattice operators. Complex arrays are
// interleaved (re, im) doubles. Every backend performs the same IEEE
// operations per element in the same order, so results are bitwise equal
// across backends; the equivalence tests rely on that.

namespace carleman::simd {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  // out[i] += a[i] + b[i], n doubles
  void (*add2)(double* out, const double* a, const double* b, std::size_t n);
  // out[i] += a[i], n doubles
  void (*add1)(double* out, const double* a, std::size_t n);
  // out[i] += s * a[i], n doubles
  void (*axpy)(double* out, double s, const double* a, std::size_t n);
  // out[k] = a[k] * b[k], n complex
  void (*cmul)(double* out, const double* a, const double* b, std::size_t n);
  // out[k] += a[k] * b[k], n complex
  void (*cmul_acc)(double* out, const double* a, const double* b, std::size_t n);
  // out[k] = |a[k]|^2, n complex -> n doubles
  void (*abs2)(double* out, const double* a, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
#if defined(CARLEMAN_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;
#endif

bool backend_available(Backend b) noexcept;
std::string_view to_string(Backend b) noexcept;

/// Table in use. Chosen once from CPU features; CARLEMAN_SIMD=scalar|avx2
/// overrides, as does select().
const KernelTable& active() noexcept;
/// Returns false (and changes nothing) if the backend is unavailable.
bool select(Backend b) noexcept;

}  // namespace carleman::simd
