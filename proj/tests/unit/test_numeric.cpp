#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "carleman/error.hpp"
#include "carleman/numeric/double_double.hpp"
#include "carleman/numeric/fit.hpp"
#include "carleman/numeric/log_scalar.hpp"
#include "carleman/numeric/quadrature.hpp"
#include "carleman/numeric/reduce.hpp"
#include "carleman/parallel.hpp"

using namespace carleman;
using num::LogScalar;
using big = boost::multiprecision::cpp_bin_float_50;

TEST_CASE("log_add small cases") {
  const LogScalar one = LogScalar::one();
  const LogScalar two = one + one;
  CHECK(two.sign() == 1);
  CHECK(two.log_mag() == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  const LogScalar x = LogScalar::from_double(-3.25);
  CHECK(x + LogScalar::zero() == x);
  CHECK((x - x).is_zero());
  CHECK((x - x).sign() == 0);
}

TEST_CASE("log_add at e^1000 against a 50-digit oracle") {
  const LogScalar a = LogScalar::from_log(1000.0);
  const LogScalar b = LogScalar::from_log(999.0);
  const big expected = big(1000) + boost::multiprecision::log1p(boost::multiprecision::exp(big(-1)));
  const double want = static_cast<double>(expected);
  const LogScalar s = a + b;
  CHECK(std::fabs(s.log_mag() - want) <= 1e-15 * want);
}

TEST_CASE("log_add properties on random inputs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mag(-800.0, 800.0);
  std::uniform_int_distribution<int> sgn(0, 1);
  for (int trial = 0; trial < 2000; ++trial) {
    const LogScalar a = LogScalar::from_log(mag(rng), sgn(rng) ? 1 : -1);
    const LogScalar b = LogScalar::from_log(mag(rng), sgn(rng) ? 1 : -1);
    const LogScalar c = LogScalar::from_log(mag(rng), 1);
    CHECK(a + b == b + a);
    const LogScalar l = (a + b) + c, r = a + (b + c);
    if (!l.is_zero() && !r.is_zero() && l.sign() == r.sign()) {
      // absolute error relative to the largest operand
      const double scale = std::max({a.log_mag(), b.log_mag(), c.log_mag()});
      const double diff = (l - r).log_mag();
      CHECK((diff - scale < std::log(1e-14) || (l - r).is_zero()));
    }
    const LogScalar pa = a.abs(), pb = b.abs();
    CHECK(pa + pb >= pa);
    CHECK(pa + pb >= pb);
  }
}

TEST_CASE("round trip below 700") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> e(-690.0, 690.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::exp(e(rng)) * (i % 2 ? -1.0 : 1.0);
    CHECK(LogScalar::from_double(x).to_double() == doctest::Approx(x).epsilon(4e-16 * 700));
  }
}

TEST_CASE("log_sum uses a fixed tree") {
  std::vector<LogScalar> terms;
  for (int i = 0; i < 37; ++i) terms.push_back(LogScalar::from_log(0.1 * i));
  const LogScalar s1 = num::log_sum(terms);
  const LogScalar s2 = num::log_sum(terms);
  CHECK(s1 == s2);
  double direct = 0.0;
  for (int i = 0; i < 37; ++i) direct += std::exp(0.1 * i);
  CHECK(s1.to_double() == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("Gauss-Legendre basics") {
  const auto rule = num::QuadratureRule::gauss_legendre(12, 0.0, 1.0);
  double wsum = 0.0;
  for (double w : rule.weights()) {
    CHECK(w > 0.0);
    wsum += w;
  }
  CHECK(std::fabs(wsum - 1.0) < 1e-14);
  CHECK(num::integrate([](double) { return 1.0; }, rule).value == doctest::Approx(1.0).epsilon(1e-15));
  const auto pi_rule = num::QuadratureRule::gauss_legendre(20, 0.0, std::numbers::pi);
  CHECK(std::fabs(num::integrate([](double t) { return std::cos(t); }, pi_rule).value) < 1e-14);
}

TEST_CASE("n-node rule is exact through degree 2n-1") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int n : {1, 2, 3, 5, 8, 13, 20, 32}) {
    std::vector<double> c(2 * n);
    for (double& x : c) x = coef(rng);
    const double a = -0.5, b = 2.0;
    auto p = [&](double t) {
      double v = 0.0;
      for (std::size_t k = c.size(); k-- > 0;) v = v * t + c[k];
      return v;
    };
    big exact = 0;
    for (std::size_t k = 0; k < c.size(); ++k)
      exact += big(c[k]) * (boost::multiprecision::pow(big(b), k + 1) - boost::multiprecision::pow(big(a), k + 1)) / (k + 1);
    const auto rule = num::QuadratureRule::gauss_legendre(n, a, b);
    CHECK(rule.exact_degree() == 2 * n - 1);
    const double got = num::detail::apply_rule<double>(p, rule);
    double scale = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) scale += std::fabs(c[k]) * std::pow(2.0, k + 1) / (k + 1);
    CHECK(std::fabs(got - static_cast<double>(exact)) <= 1e-13 * scale);
  }
}

TEST_CASE("integrate flags non-finite integrands") {
  const auto rule = num::QuadratureRule::gauss_legendre(4);
  CHECK_THROWS_AS(num::integrate([](double) { return std::nan(""); }, rule), Error);
}

TEST_CASE("I_1(2) integral against an adaptive oracle") {
  const auto rule = num::QuadratureRule::gauss_legendre(30, 0.0, std::numbers::pi);
  auto f = [](double t) { return std::exp(2.0 * std::cos(t)) * std::cos(t); };
  const auto got = num::integrate(f, rule);
  const double oracle =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi, 15, 1e-15);
  CHECK(std::fabs(got.value - oracle) <= 1e-12 * std::fabs(oracle));
  CHECK(got.error_estimate < 1e-12);
}

TEST_CASE("fit_decay recovers synthetic exponents") {
  std::vector<num::DecaySample> rows;
  for (double R = 10; R <= 40; R += 2) rows.push_back({R, LogScalar::from_log(-2.0 * R * std::log(R))});
  const auto fit = num::fit_decay(rows, num::DecayModel::RLogR);
  CHECK(fit.exponent_constant == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fit.residual < 1e-10);
  CHECK(fit.residual >= 0.0);

  std::vector<num::DecaySample> gauss;
  for (double R = 10; R <= 40; R += 1) gauss.push_back({R, LogScalar::from_log(-R * R)});
  const auto wrong = num::fit_decay(gauss, num::DecayModel::RLogR);
  const auto right = num::fit_decay(gauss, num::DecayModel::RSquared);
  CHECK(wrong.residual > right.residual);
  CHECK(right.exponent_constant == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("fit_decay degenerate inputs") {
  std::vector<num::DecaySample> same{{5, LogScalar::one()}, {5, LogScalar::one()}, {5, LogScalar::one()}};
  CHECK_THROWS_AS(num::fit_decay(same, num::DecayModel::RLinear), Error);
  std::vector<num::DecaySample> two{{5, LogScalar::one()}, {6, LogScalar::one()}};
  CHECK_THROWS_AS(num::fit_decay(two, num::DecayModel::RLinear), Error);
}

TEST_CASE("double-double exp against a 50-digit oracle") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-60.0, 60.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    const num::DoubleDouble e = num::exp(num::DoubleDouble(x));
    const big want = boost::multiprecision::exp(big(x));
    const big got = big(e.hi) + big(e.lo);
    CHECK(static_cast<double>(boost::multiprecision::abs(got / want - 1)) < 1e-29);
    const num::DoubleDouble s = num::sinh(num::DoubleDouble(x * 1e-4));
    const big ws = boost::multiprecision::sinh(big(x * 1e-4));
    CHECK(static_cast<double>(boost::multiprecision::abs((big(s.hi) + big(s.lo)) / ws - 1)) < 1e-29);
  }
}

TEST_CASE("parallel_map is index ordered and rethrows the first failure") {
  for (int workers : {1, 4, 8}) {
    set_worker_count(workers);
    const auto v = parallel_map<int>(100, [](std::size_t i) { return static_cast<int>(i * i); });
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == static_cast<int>(i * i));
    try {
      parallel_for(50, [](std::size_t i) {
        if (i == 17 || i == 40) throw Error(ErrorKind::InvalidArgument, std::to_string(i));
      });
      FAIL("no throw");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("17") != std::string::npos);
    }
  }
  set_worker_count(0);
}
