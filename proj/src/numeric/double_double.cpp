#include "carleman/numeric/double_double.hpp"

#include <limits>

namespace carleman::num {

namespace {
constexpr DoubleDouble kLn2{6.931471805599452862e-01, 2.319046813846299558e-17};
constexpr int kSquarings = 9;
}  // namespace

DoubleDouble exp(DoubleDouble x) {
  if (x.hi > 709.0) return {std::numeric_limits<double>::infinity(), 0.0};
  if (x.hi < -745.0) return {0.0, 0.0};
  if (x.hi == 0.0 && x.lo == 0.0) return {1.0, 0.0};

  // x = k ln2 + r, then e^r = (e^{r / 2^s})^{2^s} with a short Taylor series.
  const double k = std::nearbyint(x.hi / kLn2.hi);
  DoubleDouble r = x - kLn2 * DoubleDouble(k);
  r = ldexp(r, -kSquarings);

  // |r| < 7e-4: 12 terms leave a remainder below 1e-40.
  DoubleDouble term = r;
  DoubleDouble sum = r;
  for (int n = 2; n <= 12; ++n) {
    term = term * r / DoubleDouble(static_cast<double>(n));
    sum += term;
  }
  // (1 + s)^2 - 1 = s (2 + s) keeps the small part exact through the squarings.
  for (int i = 0; i < kSquarings; ++i) sum = sum * (DoubleDouble(2.0) + sum);
  return ldexp(sum + DoubleDouble(1.0), static_cast<int>(k));
}

DoubleDouble cosh(DoubleDouble x) {
  const DoubleDouble e = exp(x);
  const DoubleDouble inv = DoubleDouble(1.0) / e;
  return ldexp(e + inv, -1);
}

DoubleDouble sinh(DoubleDouble x) {
  if (std::fabs(x.hi) < 1e-3) {
    // Series avoids the cancellation in (e^x - e^-x)/2.
    const DoubleDouble x2 = x * x;
    DoubleDouble term = x;
    DoubleDouble sum = x;
    for (int n = 1; n <= 8; ++n) {
      term = term * x2 / DoubleDouble(static_cast<double>((2 * n) * (2 * n + 1)));
      sum += term;
    }
    return sum;
  }
  const DoubleDouble e = exp(x);
  const DoubleDouble inv = DoubleDouble(1.0) / e;
  return ldexp(e - inv, -1);
}

}  // namespace carleman::num
