#include <atomic>
#include <cstdlib>
#include <string>

#include "carleman/simd/kernels.hpp"

namespace carleman::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(CARLEMAN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* table_for(Backend b) noexcept {
  switch (b) {
    case Backend::Scalar: return &scalar_kernels();
    case Backend::Avx2:
#if defined(CARLEMAN_HAVE_AVX2)
      if (cpu_has_avx2()) return &avx2_kernels();
#endif
      return nullptr;
  }
  return nullptr;
}

const KernelTable* initial_table() noexcept {
  if (const char* env = std::getenv("CARLEMAN_SIMD")) {
    const std::string v = env;
    if (v == "scalar") return &scalar_kernels();
    if (v == "avx2")
      if (const auto* t = table_for(Backend::Avx2)) return t;
  }
  if (const auto* t = table_for(Backend::Avx2)) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> t{initial_table()};
  return t;
}

}  // namespace

bool backend_available(Backend b) noexcept { return table_for(b) != nullptr; }

std::string_view to_string(Backend b) noexcept {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_acquire); }

bool select(Backend b) noexcept {
  const KernelTable* t = table_for(b);
  if (!t) return false;
  current().store(t, std::memory_order_release);
  return true;
}

}  // namespace carleman::simd
