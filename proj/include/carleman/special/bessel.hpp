#pragma once

#include <string_view>

#include "carleman/numeric/log_scalar.hpp"

namespace carleman::special {

enum class BesselMethod { Integral, Series, Asymptotic };

std::string_view to_string(BesselMethod m) noexcept;

/// A Bessel value together with how it was obtained.
struct BesselEval {
  double order = 0.0;
  double argument = 0.0;
  num::LogScalar value;
  BesselMethod method = BesselMethod::Series;

  double to_double() const noexcept { return value.to_double(); }
};

/// Modified Bessel I_m(x) for |x| <= 700. Throws Overflow beyond; use
/// bessel_i_log there.
double bessel_i(int m, double x);
/// I_m(x) for any real x, log domain.
num::LogScalar bessel_i_log(int m, double x);

/// Ascending series sum (x/2)^{m+2k} / (k! (m+k)!), compensated and scaled by
/// the largest term.
BesselEval bessel_i_series(int m, double x);
/// (1/pi) int_0^pi e^{x cos t} cos(m t) dt by Gauss-Legendre on a contour
/// shifted through the saddle point, so large m does not cancel.
BesselEval bessel_i_integral(int m, double x);

/// (1/sqrt(2 pi n)) (e z / 2)^n e^{-n log n}; requires n >= 5.
num::LogScalar bessel_i_asymptotic(int n, double z);

/// Bessel J_n(z) for |z| <= 700 (integral representation).
double bessel_j(int n, double z);
/// Alternating ascending series with compensated summation. Loses
/// about log10(e^{|z|} / |J_n(z)|) digits to cancellation.
BesselEval bessel_j_series(int n, double z);
BesselEval bessel_j_integral(int n, double z);

/// Macdonald K_nu(x) = int_0^inf e^{-x cosh t} cosh(nu t) dt, x > 0.
num::LogScalar bessel_k(double nu, double x);

}  // namespace carleman::special
