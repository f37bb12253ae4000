#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "carleman/simd/kernels.hpp"

using namespace carleman::simd;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng) * std::exp(4.0 * g(rng));
  return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar backend reference values") {
  const auto& k = scalar_kernels();
  std::vector<double> a{1, 2, 3, 4}, b{5, 6, 7, 8}, out(4, 0.0);
  k.cmul(out.data(), a.data(), b.data(), 2);
  // (1+2i)(5+6i) = -7+16i, (3+4i)(7+8i) = -11+52i
  CHECK(out == std::vector<double>{-7, 16, -11, 52});
  k.abs2(out.data(), a.data(), 2);
  CHECK(out[0] == 5.0);
  CHECK(out[1] == 25.0);
}

#if defined(CARLEMAN_HAVE_AVX2)
TEST_CASE("AVX2 kernels match the scalar reference bit for bit") {
  if (!backend_available(Backend::Avx2)) return;
  const auto& s = scalar_kernels();
  const auto& v = avx2_kernels();
  for (std::size_t n : {0u, 1u, 2u, 3u, 5u, 8u, 17u, 64u, 129u, 1001u}) {
    const auto a = random_vec(2 * n, 1 + n), b = random_vec(2 * n, 2 + n), base = random_vec(2 * n, 3 + n);
    auto run = [&](const KernelTable& k, int op) {
      std::vector<double> out = base;
      switch (op) {
        case 0: k.add2(out.data(), a.data(), b.data(), 2 * n); break;
        case 1: k.add1(out.data(), a.data(), 2 * n); break;
        case 2: k.axpy(out.data(), -2.5, a.data(), 2 * n); break;
        case 3: k.cmul(out.data(), a.data(), b.data(), n); break;
        case 4: k.cmul_acc(out.data(), a.data(), b.data(), n); break;
        case 5: k.abs2(out.data(), a.data(), n); break;
      }
      return out;
    };
    for (int op = 0; op < 6; ++op) {
      CAPTURE(n);
      CAPTURE(op);
      CHECK(bitwise_equal(run(s, op), run(v, op)));
    }
  }
}
#endif

TEST_CASE("select switches backends and refuses unavailable ones") {
  CHECK(select(Backend::Scalar));
  CHECK(active().backend == Backend::Scalar);
  if (backend_available(Backend::Avx2)) {
    CHECK(select(Backend::Avx2));
    CHECK(active().backend == Backend::Avx2);
  } else {
    CHECK_FALSE(select(Backend::Avx2));
  }
}
