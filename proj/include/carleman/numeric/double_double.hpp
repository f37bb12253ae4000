#pragma once

#include <cmath>
#include <complex>

namespace carleman::num {

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2, about 32 significant digits.
//
// The conjugated Carleman operators carry cosh/sinh coefficients of size
// e^{40} whose sum collapses to e^{-40}; double-double keeps that
// cancellation below 1e-16 of the operand scale.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double x) : hi(x), lo(0.0) {}  // NOLINT: implicit by design of arithmetic
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

  double to_double() const { return hi + lo; }
};

namespace dd_detail {
inline DoubleDouble quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}
inline DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}
inline DoubleDouble two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}
}  // namespace dd_detail

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = dd_detail::two_sum(a.hi, b.hi);
  DoubleDouble t = dd_detail::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = dd_detail::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return dd_detail::quick_two_sum(s.hi, s.lo);
}
inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }
inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
  DoubleDouble p = dd_detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return dd_detail::quick_two_sum(p.hi, p.lo);
}
inline DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
  const double q1 = a.hi / b.hi;
  DoubleDouble r = a - b * DoubleDouble(q1);
  const double q2 = r.hi / b.hi;
  r = r - b * DoubleDouble(q2);
  const double q3 = r.hi / b.hi;
  return DoubleDouble(dd_detail::quick_two_sum(q1, q2)) + DoubleDouble(q3);
}
inline DoubleDouble& operator+=(DoubleDouble& a, DoubleDouble b) { return a = a + b; }
inline DoubleDouble& operator-=(DoubleDouble& a, DoubleDouble b) { return a = a - b; }
inline DoubleDouble& operator*=(DoubleDouble& a, DoubleDouble b) { return a = a * b; }

inline DoubleDouble ldexp(DoubleDouble a, int e) { return {std::ldexp(a.hi, e), std::ldexp(a.lo, e)}; }

/// exp to ~1e-31 relative for |x| < 700.
DoubleDouble exp(DoubleDouble x);
DoubleDouble cosh(DoubleDouble x);
DoubleDouble sinh(DoubleDouble x);

/// Complex number over double-double components.
struct ComplexDD {
  DoubleDouble re;
  DoubleDouble im;

  ComplexDD() = default;
  ComplexDD(DoubleDouble r, DoubleDouble i = {}) : re(r), im(i) {}
  explicit ComplexDD(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
};

inline ComplexDD operator+(const ComplexDD& a, const ComplexDD& b) { return {a.re + b.re, a.im + b.im}; }
inline ComplexDD operator-(const ComplexDD& a, const ComplexDD& b) { return {a.re - b.re, a.im - b.im}; }
inline ComplexDD operator-(const ComplexDD& a) { return {-a.re, -a.im}; }
inline ComplexDD operator*(const ComplexDD& a, const ComplexDD& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline ComplexDD operator*(DoubleDouble s, const ComplexDD& a) { return {s * a.re, s * a.im}; }
inline ComplexDD& operator+=(ComplexDD& a, const ComplexDD& b) { return a = a + b; }
inline ComplexDD& operator-=(ComplexDD& a, const ComplexDD& b) { return a = a - b; }

/// Multiplication by i.
inline ComplexDD times_i(const ComplexDD& a) { return {-a.im, a.re}; }
inline ComplexDD conj(const ComplexDD& a) { return {a.re, -a.im}; }
inline DoubleDouble norm(const ComplexDD& a) { return a.re * a.re + a.im * a.im; }

}  // namespace carleman::num
