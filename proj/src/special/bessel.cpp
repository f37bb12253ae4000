#include "carleman/special/bessel.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "carleman/error.hpp"
#include "carleman/numeric/quadrature.hpp"
#include "carleman/numeric/reduce.hpp"

namespace carleman::special {

namespace {

using num::LogScalar;
constexpr double kPi = std::numbers::pi;
constexpr double kMaxArgument = 700.0;

// Gauss-Legendre with node doubling until two consecutive results agree to
// rel_tol (relative to the larger magnitude of abs_scale and the result).
template <class F>
double converged_integral(F&& f, std::span<const double> breaks, double rel_tol, double abs_scale = 0.0) {
  int n = 16;
  double prev = num::detail::apply_rule<double>(f, num::QuadratureRule::composite(breaks, n));
  for (; n <= 4096; n *= 2) {
    const double next = num::detail::apply_rule<double>(f, num::QuadratureRule::composite(breaks, 2 * n));
    if (std::fabs(next - prev) <= rel_tol * std::max(std::fabs(next), abs_scale)) return next;
    prev = next;
  }
  throw Error(ErrorKind::NonFinite, "quadrature did not converge");
}

// Sum of a series given its largest term's log and the term ratios
// t_{k+1}/t_k, walking out from the peak index in both directions.
template <class Ratio>
LogScalar peak_scaled_sum(int k_peak, double log_peak, Ratio ratio, int sign_alternation) {
  num::CompensatedSum sum;
  sum.add(1.0);
  double r = 1.0;
  for (int k = k_peak; k < k_peak + 100000; ++k) {
    r *= ratio(k);
    const double term = (sign_alternation && ((k + 1 - k_peak) % 2)) ? -r : r;
    sum.add(term);
    if (r < 1e-18 * std::fabs(sum.value())) break;
  }
  r = 1.0;
  for (int k = k_peak - 1; k >= 0; --k) {
    r /= ratio(k);
    const double term = (sign_alternation && ((k_peak - k) % 2)) ? -r : r;
    sum.add(term);
    if (r < 1e-18 * std::fabs(sum.value())) break;
  }
  return LogScalar::from_log(log_peak) * LogScalar::from_double(sum.value());
}

// log of (x/2)^{m+2k} / (k! (m+k)!)
double log_series_term(int m, int k, double half_x) {
  return (m + 2.0 * k) * std::log(half_x) - std::lgamma(k + 1.0) - std::lgamma(m + k + 1.0);
}

int series_peak(int m, double half_x) {
  // (k+1)(m+k+1) = (x/2)^2 at the crossover of the term ratio through 1.
  const double q = half_x * half_x;
  const double k = 0.5 * (-(m + 2.0) + std::sqrt(m * m + 4.0 * q));
  return std::max(0, static_cast<int>(std::ceil(k)));
}

LogScalar apply_parity(LogScalar v, int m, double x) {
  return (x < 0.0 && (m % 2 != 0)) ? -v : v;
}

}  // namespace

std::string_view to_string(BesselMethod m) noexcept {
  switch (m) {
    case BesselMethod::Integral: return "integral";
    case BesselMethod::Series: return "series";
    case BesselMethod::Asymptotic: return "asymptotic";
  }
  return "?";
}

BesselEval bessel_i_series(int m, double x) {
  m = std::abs(m);
  BesselEval out{static_cast<double>(m), x, {}, BesselMethod::Series};
  if (x == 0.0) {
    out.value = m == 0 ? LogScalar::one() : LogScalar::zero();
    return out;
  }
  const double half_x = std::fabs(x) / 2.0;
  const double q = half_x * half_x;
  const int k_peak = series_peak(m, half_x);
  auto ratio = [&](int k) { return q / ((k + 1.0) * (m + k + 1.0)); };
  out.value = apply_parity(peak_scaled_sum(k_peak, log_series_term(m, k_peak, half_x), ratio, 0), m, x);
  return out;
}

BesselEval bessel_i_integral(int m, double x) {
  m = std::abs(m);
  BesselEval out{static_cast<double>(m), x, {}, BesselMethod::Integral};
  if (x == 0.0) {
    out.value = m == 0 ? LogScalar::one() : LogScalar::zero();
    return out;
  }
  const double ax = std::fabs(x);
  // Saddle: sinh(s) = m / x. On the shifted contour the integrand is
  // e^{-rho (1 - cos t)} cos(m (t - sin t)) with rho = sqrt(x^2 + m^2).
  const double s = std::asinh(m / ax);
  const double rho = std::hypot(ax, static_cast<double>(m));
  const double log_scale = rho - m * s;
  double upper = kPi;
  if (rho > 20.0) upper = std::min(kPi, std::acos(1.0 - 40.0 / rho));
  auto g = [&](double t) { return std::exp(-rho * (1.0 - std::cos(t))) * std::cos(m * (t - std::sin(t))); };
  const double breaks[] = {0.0, 0.5 * upper, upper};
  const double integral = converged_integral(g, breaks, 1e-15) / kPi;
  out.value = apply_parity(LogScalar::from_log(log_scale) * LogScalar::from_double(integral), m, x);
  return out;
}

LogScalar bessel_i_log(int m, double x) {
  m = std::abs(m);
  // The series walks about x terms either side of its peak; past the
  // budget the shifted integral is cheaper and just as accurate.
  if (std::fabs(x) <= 200.0 && m <= 400) return bessel_i_series(m, x).value;
  return bessel_i_integral(m, x).value;
}

double bessel_i(int m, double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::NonFinite, "bessel_i argument not finite");
  if (std::fabs(x) > kMaxArgument)
    throw Error(ErrorKind::Overflow, "bessel_i argument beyond 700; use bessel_i_log");
  return bessel_i_log(m, x).to_double();
}

LogScalar bessel_i_asymptotic(int n, double z) {
  if (n < 5) throw Error(ErrorKind::InvalidArgument, "asymptotic form needs n >= 5");
  if (!(z > 0.0)) throw Error(ErrorKind::InvalidArgument, "asymptotic form needs z > 0");
  const double nn = n;
  return LogScalar::from_log(nn * (1.0 + std::log(z / 2.0)) - nn * std::log(nn) - 0.5 * std::log(2.0 * kPi * nn));
}

BesselEval bessel_j_series(int n, double z) {
  const int sign_n = (n < 0 && (n % 2 != 0)) ? -1 : 1;  // J_{-n} = (-1)^n J_n
  n = std::abs(n);
  BesselEval out{static_cast<double>(n), z, {}, BesselMethod::Series};
  if (z == 0.0) {
    out.value = n == 0 ? LogScalar::one() : LogScalar::zero();
    return out;
  }
  const double half_z = std::fabs(z) / 2.0;
  const double q = half_z * half_z;
  const int k_peak = series_peak(n, half_z);
  auto ratio = [&](int k) { return q / ((k + 1.0) * (n + k + 1.0)); };
  LogScalar v = peak_scaled_sum(k_peak, log_series_term(n, k_peak, half_z), ratio, 1);
  if (k_peak % 2 != 0) v = -v;
  if (sign_n < 0) v = -v;
  out.value = apply_parity(v, n, z);
  return out;
}

BesselEval bessel_j_integral(int n, double z) {
  const int sign_n = (n < 0 && (n % 2 != 0)) ? -1 : 1;
  n = std::abs(n);
  BesselEval out{static_cast<double>(n), z, {}, BesselMethod::Integral};
  if (z == 0.0) {
    out.value = n == 0 ? LogScalar::one() : LogScalar::zero();
    return out;
  }
  const double az = std::fabs(z);
  LogScalar v;
  if (n > az) {
    // Saddle at cosh(s) = n / z; the shifted integrand is
    // e^{-z sinh(s) (1 - cos t)} cos(n (t - sin t)).
    const double s = std::acosh(n / az);
    const double damp = az * std::sinh(s);
    const double log_scale = damp - n * s;
    auto g = [&](double t) { return std::exp(-damp * (1.0 - std::cos(t))) * std::cos(n * (t - std::sin(t))); };
    const double breaks[] = {0.0, 0.5 * kPi, kPi};
    const double integral = converged_integral(g, breaks, 1e-15) / kPi;
    v = LogScalar::from_log(log_scale) * LogScalar::from_double(integral);
  } else {
    // Oscillatory regime: |J| is O(z^{-1/3}) at worst, cancellation is mild.
    auto g = [&](double t) { return std::cos(n * t - az * std::sin(t)); };
    std::vector<double> breaks;
    const int pieces = 2 + static_cast<int>(az / 8.0);
    for (int p = 0; p <= pieces; ++p) breaks.push_back(kPi * p / pieces);
    v = LogScalar::from_double(converged_integral(g, breaks, 1e-15, 1.0) / kPi);
  }
  if (sign_n < 0) v = -v;
  out.value = apply_parity(v, n, z);
  return out;
}

double bessel_j(int n, double z) {
  if (!std::isfinite(z)) throw Error(ErrorKind::NonFinite, "bessel_j argument not finite");
  if (std::fabs(z) > kMaxArgument) throw Error(ErrorKind::Overflow, "bessel_j argument beyond 700");
  return bessel_j_integral(n, z).to_double();
}

LogScalar bessel_k(double nu, double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::InvalidArgument, "bessel_k needs x > 0");
  nu = std::fabs(nu);
  auto log_f = [&](double t) { return -x * std::cosh(t) + num::log_cosh(nu * t); };
  // Peak of the log integrand; x sinh t = nu tanh(nu t) has its root near
  // asinh(nu / x). A few Newton steps pin it down.
  double peak = nu > 0.0 ? std::asinh(nu / x) : 0.0;
  for (int it = 0; it < 50 && peak > 0.0; ++it) {
    const double th = std::tanh(nu * peak);
    const double g = -x * std::sinh(peak) + nu * th;
    const double dg = -x * std::cosh(peak) + nu * nu * (1.0 - th * th);
    if (dg >= 0.0) break;
    const double next = std::max(0.0, peak - g / dg);
    if (std::fabs(next - peak) < 1e-15 * (1.0 + peak)) {
      peak = next;
      break;
    }
    peak = next;
  }
  const double log_peak = log_f(peak);
  // Cut both tails where the integrand is below e^{-45} of the peak.
  constexpr double kDrop = 45.0;
  auto edge = [&](double dir) {
    double step = 0.05;
    double t = peak;
    while (true) {
      const double next = t + dir * step;
      if (next <= 0.0) return 0.0;
      if (log_f(next) < log_peak - kDrop) {
        // bisect to the crossing
        double a = t, b = next;
        for (int i = 0; i < 60; ++i) {
          const double mid = 0.5 * (a + b);
          (log_f(mid) < log_peak - kDrop ? b : a) = mid;
        }
        return b;
      }
      t = next;
      step *= 1.5;
    }
  };
  const double lo = peak > 0.0 ? edge(-1.0) : 0.0;
  const double hi = edge(1.0);
  std::vector<double> breaks;
  constexpr int kPieces = 8;
  if (lo < peak) {
    for (int p = 0; p < kPieces; ++p) breaks.push_back(lo + (peak - lo) * p / kPieces);
  }
  for (int p = 0; p <= kPieces; ++p) breaks.push_back(peak + (hi - peak) * p / kPieces);
  auto g = [&](double t) { return std::exp(log_f(t) - log_peak); };
  const double integral = converged_integral(g, breaks, 1e-15);
  return LogScalar::from_log(log_peak) * LogScalar::from_double(integral);
}

}  // namespace carleman::special
