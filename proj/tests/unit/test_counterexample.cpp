#include <doctest.h>

#include <random>
#include <set>

#include "carleman/counterexample/construction.hpp"
#include "carleman/error.hpp"

using namespace carleman;
using namespace carleman::counterexample;

namespace {

Site at(int a, int b) { return Site{a, b, 0, 0}; }

Dyadic random_dyadic(std::mt19937_64& rng) {
  std::uniform_int_distribution<long long> m(-1000000, 1000000);
  std::uniform_int_distribution<int> e(-80, 40);
  return Dyadic(Integer(m(rng)), e(rng));
}

}  // namespace

TEST_CASE("dyadic arithmetic agrees with exact rationals") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const Dyadic a = random_dyadic(rng), b = random_dyadic(rng);
    const Rational qa = a.to_rational(), qb = b.to_rational();
    CHECK((a + b).to_rational() == qa + qb);
    CHECK((a - b).to_rational() == qa - qb);
    CHECK((a * b).to_rational() == qa * qb);
    CHECK(((a < b) == (qa < qb)));
    CHECK(Dyadic::from_rational(qa).value() == a);
    if (!a.is_zero()) CHECK(boost::multiprecision::abs(a.mantissa()) % 2 == 1);
  }
  CHECK(!Dyadic::from_rational(Rational(1, 3)));
  CHECK(Dyadic::pow2(-3, -1).to_double() == -0.125);
  CHECK(Dyadic::pow2(5).is_signed_power());
  CHECK(!Dyadic(Integer(3), 0).is_signed_power());
}

TEST_CASE("literal values at the stated points") {
  for (int R : {10, 20}) {
    const auto ce = build_counterexample({R, 20, ValueMode::LiteralPaper});
    CHECK(ce.value_at(at(0, 0)) == Dyadic::pow2(0));
    CHECK(ce.value_at(at(0, R)).is_zero());
    for (int s1 : {-1, 1})
      for (int s2 : {-1, 1}) CHECK(ce.value_at(at(s1, R + s2)).is_zero());
    CHECK(ce.value_at(at(0, R - 3)) == Dyadic::pow2(-(R - 3)));
    // literal ring entries, k = R - 3
    const int k = R - 3;
    CHECK(ce.value_at(at(0, R + 3)) == Dyadic::pow2(-k));
    CHECK(ce.value_at(at(1, R - 2)) == Dyadic::pow2(-(k - 1), -1));
    CHECK(ce.value_at(at(-2, R + 1)) == Dyadic::pow2(-(k - 1)));
    CHECK(ce.value_at(at(3, R)) == Dyadic::pow2(-k, -1));
  }
}

TEST_CASE("literal mode fails harmonicity at the axis-extreme diamond sites") {
  const int R = 20, k = R - 3;
  const auto ce = build_counterexample({R, 60, ValueMode::LiteralPaper});
  const auto rep = verify_counterexample(ce);
  CHECK(rep.vanishing);
  CHECK(rep.origin);
  CHECK(rep.tail);
  CHECK(!rep.harmonic_on_diamond);
  std::set<std::pair<int, int>> sites;
  for (const auto& r : rep.harmonic_failures) {
    sites.insert({r.site[0], r.site[1]});
    const int sign = r.site[0] == 0 ? -1 : 1;
    CHECK(r.residual == Rational(3 * sign) / Rational(Integer(1) << k));
  }
  CHECK(sites == std::set<std::pair<int, int>>{{0, R - 2}, {0, R + 2}, {-2, R}, {2, R}});
  CHECK(rep.equation_failures.size() == 4);
  CHECK_THROWS_AS(require_verified(rep), Error);
}

TEST_CASE("repair is the weighted projection onto harmonic ring values") {
  const int R = 20, k = R - 3;
  const auto rr = repair_ring(R);
  CHECK(rr.equations == 3);
  CHECK(rr.rank == 3);
  REQUIRE(rr.repaired_values.size() == 4);
  CHECK(rr.repaired_values[0] == Dyadic::pow2(-(k - 1)));
  CHECK(rr.repaired_values[1] == Dyadic::pow2(-k, -1));
  CHECK(rr.repaired_values[2] == Dyadic::pow2(-k));
  CHECK(rr.repaired_values[3] == Dyadic::pow2(-(k - 1), -1));
  // harmonic ring values a + 2b = b + c = e + 2c = 0 form the line (-2t, t, -t, 2t);
  // the weighted distance from the formula values along it is minimal at t = -1
  auto dist = [&](const std::vector<Rational>& x) {
    Rational s = 0;
    for (int i = 0; i < 4; ++i) {
      const Rational d = x[i] - rr.formula_values[i].to_rational();
      s += rr.multiplicity[i] * d * d;
    }
    return s;
  };
  const Rational unit = Rational(1) / Rational(Integer(1) << k);
  auto line = [&](Rational t) { return std::vector<Rational>{-2 * t * unit, t * unit, -t * unit, 2 * t * unit}; };
  const Rational best = dist(line(-1));
  for (int n = -8; n <= 8; ++n)
    if (n != 0) CHECK(dist(line(Rational(-1) + Rational(n, 16))) > best);
}

TEST_CASE("repaired mode passes every exact check") {
  for (int R : {10, 20, 40}) {
    const auto ce = build_counterexample({R, 60, ValueMode::Repaired});
    const auto rep = verify_counterexample(ce);
    CHECK(rep.all_pass());
    CHECK_NOTHROW(require_verified(rep));
    CHECK(rep.tail_bound < Rational(Integer(1), Integer(1) << 50));
    CHECK(rep.decay_constant == 7);
  }
}

TEST_CASE("potential values and R-independent bound") {
  const auto ce = build_counterexample({12, 20, ValueMode::Repaired});
  CHECK(ce.potential_at(at(3, 4)) == -1);   // interior quadrant
  CHECK(ce.potential_at(at(0, 4)) == Rational(1, 2));
  CHECK(ce.potential_at(at(0, 0)) == 2);
  CHECK(ce.potential_at(at(0, 12)) == 0);
  // far region: ratios in {1/2, 2}
  for (int a = 3; a < 10; ++a)
    for (int b = -5; b < 5; ++b) CHECK(boost::multiprecision::abs(ce.potential_at(at(a, b))) <= 9);
  const auto scan = potential_bound_scan({10, 20, 40});
  CHECK(scan.identical);
  CHECK(scan.sup[0] == scan.sup[2]);
  const auto V = ce.potential();
  CHECK(V.is_real());
  CHECK(V.sup_norm() == static_cast<double>(ce.potential_sup()));
}

TEST_CASE("spec validation and mode parsing") {
  CHECK_THROWS_AS(build_counterexample({6, 60, ValueMode::Repaired}), Error);
  CHECK(parse_value_mode("literal_paper") == ValueMode::LiteralPaper);
  CHECK_THROWS_AS(parse_value_mode("other"), Error);
  const CounterexampleSpec s{20, 60, ValueMode::Repaired};
  CHECK(s.window().half_width() == 80);
}
