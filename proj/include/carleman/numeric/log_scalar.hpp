#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace carleman::num {

/// Signed real stored as (natural log of magnitude, sign).
///
/// Weights such as exp(alpha * |j/R + phi e1|^2) with alpha ~ R log R leave
/// the double range long before the quantities they multiply become
/// negligible, so every weighted magnitude in the toolkit travels in this
/// form. Zero is represented by sign 0 and log_mag -inf.
class LogScalar {
 public:
  constexpr LogScalar() noexcept = default;

  static LogScalar zero() noexcept { return {}; }
  static LogScalar one() noexcept { return from_log(0.0); }
  /// Positive value exp(log_mag); -inf gives zero.
  static LogScalar from_log(double log_mag, int sign = 1) noexcept;
  static LogScalar from_double(double x) noexcept;

  double log_mag() const noexcept { return log_mag_; }
  int sign() const noexcept { return sign_; }
  bool is_zero() const noexcept { return sign_ == 0; }

  /// Ordinary float; overflows to +-inf and underflows to 0 outside range.
  double to_double() const noexcept;

  LogScalar operator-() const noexcept { return from_log(log_mag_, -sign_); }
  LogScalar abs() const noexcept { return from_log(log_mag_, sign_ == 0 ? 0 : 1); }
  LogScalar sqrt() const;  // requires sign >= 0
  LogScalar pow(double p) const;  // requires sign >= 0

  friend LogScalar operator*(LogScalar a, LogScalar b) noexcept {
    return from_log(a.log_mag_ + b.log_mag_, a.sign_ * b.sign_);
  }
  friend LogScalar operator/(LogScalar a, LogScalar b);
  friend LogScalar operator+(LogScalar a, LogScalar b) noexcept;
  friend LogScalar operator-(LogScalar a, LogScalar b) noexcept { return a + (-b); }

  LogScalar& operator+=(LogScalar b) noexcept { return *this = *this + b; }
  LogScalar& operator*=(LogScalar b) noexcept { return *this = *this * b; }

  friend bool operator==(LogScalar a, LogScalar b) noexcept {
    return a.sign_ == b.sign_ && (a.sign_ == 0 || a.log_mag_ == b.log_mag_);
  }
  /// Total order on the represented reals.
  friend bool operator<(LogScalar a, LogScalar b) noexcept;
  friend bool operator<=(LogScalar a, LogScalar b) noexcept { return !(b < a); }
  friend bool operator>(LogScalar a, LogScalar b) noexcept { return b < a; }
  friend bool operator>=(LogScalar a, LogScalar b) noexcept { return !(a < b); }

 private:
  double log_mag_ = -std::numeric_limits<double>::infinity();
  int sign_ = 0;
};

inline LogScalar log_add(LogScalar a, LogScalar b) noexcept { return a + b; }

/// Sum with a fixed pairwise tree; the order depends only on the length.
LogScalar log_sum(std::span<const LogScalar> terms) noexcept;

/// Sum of exp(log_terms[i]) for nonnegative terms, pairwise tree order.
LogScalar log_sum_exp(std::span<const double> log_terms) noexcept;

/// log(sinh x) and log(cosh x) for x > 0 without overflow.
double log_sinh(double x);
double log_cosh(double x) noexcept;

}  // namespace carleman::num
