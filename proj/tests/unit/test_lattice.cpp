#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <filesystem>
#include <random>

#include "carleman/error.hpp"
#include "carleman/io/field_io.hpp"
#include "carleman/io/hash.hpp"
#include "carleman/lattice/field.hpp"
#include "carleman/simd/kernels.hpp"

using namespace carleman;
using namespace carleman::lattice;

namespace {

LatticeField random_field(const LatticeWindow& w, std::uint64_t seed, int inset = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  LatticeField u(w);
  w.for_each_site([&](std::size_t i, const Site& j) {
    const double re = g(rng), im = g(rng);
    if (max_norm(j, w.dimension()) <= w.half_width() - inset) u[i] = {re, im};
  });
  return u;
}

Site at(int a, int b = 0, int c = 0) { return Site{a, b, c, 0}; }

}  // namespace

TEST_CASE("window layout") {
  LatticeWindow w(2, 3);
  CHECK(w.site_count() == 49);
  CHECK(w.index(at(-3, -3)) == 0);
  CHECK(w.site(w.index(at(1, -2)))[0] == 1);
  CHECK(w.site(w.index(at(1, -2)))[1] == -2);
  CHECK(w.stride(0) == 7);
  CHECK(w.stride(1) == 1);
  CHECK_FALSE(w.contains(at(4, 0)));
  CHECK_THROWS_AS(LatticeWindow(0, 3), Error);
  CHECK_THROWS_AS(LatticeWindow(1, 1), Error);
}

TEST_CASE("Laplacian examples") {
  LatticeWindow w1(1, 5);
  LatticeField delta(w1);
  delta.at(at(0)) = 1.0;
  const auto L = discrete_laplacian(delta);
  CHECK(L.at(at(0)) == Complex(-2.0));
  CHECK(L.at(at(1)) == Complex(1.0));
  CHECK(L.at(at(-1)) == Complex(1.0));
  CHECK(L.at(at(2)) == Complex(0.0));

  LatticeWindow w2(2, 6);
  LatticeField lin(w2), cst(w2);
  w2.for_each_site([&](std::size_t i, const Site& j) {
    lin[i] = j[0];
    cst[i] = {2.0, -1.0};
  });
  const auto Llin = discrete_laplacian(lin);
  const auto Lc = discrete_laplacian(cst);
  w2.for_each_site([&](std::size_t i, const Site& j) {
    if (max_norm(j, 2) < 6) {
      CHECK(Llin[i] == Complex(0.0));
      CHECK(Lc[i] == Complex(0.0));
    }
  });
}

TEST_CASE("Laplacian is symmetric and spectrally bounded") {
  for (int d : {1, 2, 3}) {
    LatticeWindow w(d, d == 3 ? 4 : 9);
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto u = random_field(w, s), v = random_field(w, 100 + s);
      const auto Lu = discrete_laplacian(u), Lv = discrete_laplacian(v);
      const Complex a = inner(Lu.values(), v.values()), b = inner(u.values(), Lv.values());
      CHECK(std::abs(a - b) <= 1e-12 * std::sqrt(u.norm2() * v.norm2()));
      const double q = -inner(Lu.values(), u.values()).real();
      CHECK(q >= -1e-12 * u.norm2());
      CHECK(q <= 4.0 * d * u.norm2() * (1 + 1e-12));
    }
  }
}

TEST_CASE("Laplacian is identical under both SIMD backends") {
  LatticeWindow w(2, 17);
  const auto u = random_field(w, 4);
  simd::select(simd::Backend::Scalar);
  const auto a = discrete_laplacian(u);
  if (simd::select(simd::Backend::Avx2)) {
    const auto b = discrete_laplacian(u);
    for (std::size_t i = 0; i < a.values().size(); ++i) CHECK(a[i] == b[i]);
  }
  simd::select(simd::Backend::Scalar);
}

TEST_CASE("weighted_l2") {
  LatticeWindow w(2, 12);
  LatticeField delta(w);
  delta.at(at(0, 0)) = 1.0;
  CHECK(weighted_l2(delta, [](const Site&) { return num::LogScalar::one(); }).to_double() == doctest::Approx(1.0));
  const double alpha = 2000.0, R = 10.0;
  auto weight = [&](const Site& j) { return num::LogScalar::from_log(alpha * euclidean_norm2(j, 2) / (R * R)); };
  CHECK(weighted_l2(delta, weight).to_double() == doctest::Approx(1.0));
  LatticeField far(w);
  far.at(at(10, 0)) = Complex(0.3, -0.4);
  // e^{alpha} * 0.5, far outside double range.
  using big = boost::multiprecision::cpp_bin_float_50;
  const big oracle = big(alpha) + boost::multiprecision::log(big(0.5));
  const auto got = weighted_l2(far, weight);
  CHECK(std::fabs(got.log_mag() - static_cast<double>(oracle)) <= 1e-14 * alpha);
}

TEST_CASE("ring_mass examples and partition bound") {
  LatticeWindow w(1, 10);
  LatticeField delta(w), ones(w);
  delta.at(at(0)) = 1.0;
  w.for_each_site([&](std::size_t i, const Site&) { ones[i] = 1.0; });
  CHECK(ring_mass(delta, 5).is_zero());
  CHECK(ring_mass(ones, 5).to_double() == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));
  CHECK_THROWS_AS(ring_mass(ones, 9), Error);

  LatticeWindow w2(2, 30);
  const auto u = random_field(w2, 8);
  double total = 0.0;
  for (double R = 3; R + 1 < 30; R += 4) total += std::pow(ring_mass(u, R).to_double(), 2);
  CHECK(total <= u.norm2() * (1 + 1e-14));
}

TEST_CASE("boundary mass diagnostic") {
  LatticeWindow w(2, 8);
  LatticeField u(w);
  u.at(at(0, 0)) = 1.0;
  CHECK(boundary_mass_fraction(u) == 0.0);
  u.at(at(7, 0)) = 1.0;
  CHECK(boundary_mass_fraction(u) == doctest::Approx(0.5));
}

TEST_CASE("field round trip and hash") {
  LatticeWindow w(2, 5);
  const auto u = random_field(w, 21);
  const auto bytes = io::encode_field(u);
  CHECK(bytes.size() == 16 + 16 * w.site_count());
  CHECK(static_cast<unsigned char>(bytes[0]) == 2);
  const auto back = io::decode_field(bytes);
  CHECK(back.window() == w);
  for (std::size_t i = 0; i < w.site_count(); ++i) CHECK(back[i] == u[i]);
  const auto dir = std::filesystem::temp_directory_path() / "carleman_field_test";
  std::filesystem::create_directories(dir);
  io::write_field(dir / "u.bin", u, {{"note", "test"}});
  CHECK(std::filesystem::exists(dir / "u.bin.json"));
  const auto read = io::read_field(dir / "u.bin");
  CHECK(read[7] == u[7]);
  // git hash-object of "hello\n"
  CHECK(io::git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}
