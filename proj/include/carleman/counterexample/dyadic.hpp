#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "carleman/lattice/window.hpp"

namespace carleman::counterexample {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact m * 2^e, kept with m odd (or m = 0, e = 0).
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(Integer mantissa, int exponent);
  static Dyadic pow2(int e, int sign = 1);
  /// Nullopt unless the denominator of q is a power of two.
  static std::optional<Dyadic> from_rational(const Rational& q);

  const Integer& mantissa() const noexcept { return m_; }
  int exponent() const noexcept { return e_; }
  bool is_zero() const noexcept { return m_ == 0; }
  int sign() const noexcept { return m_.sign(); }
  /// True for +-2^e.
  bool is_signed_power() const;

  Rational to_rational() const;
  /// Exact whenever |mantissa| < 2^53 and the exponent is in range.
  double to_double() const;
  std::string to_string() const;
  nlohmann::json to_json() const;

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  Dyadic operator-() const { return Dyadic(-m_, e_); }
  Dyadic& operator+=(const Dyadic& b) { return *this = *this + b; }
  friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.m_ == b.m_ && a.e_ == b.e_; }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

 private:
  void normalize();
  Integer m_ = 0;
  int e_ = 0;
};

Dyadic abs(const Dyadic& a);

/// Exact dyadic value per site of a window.
class DyadicField {
 public:
  explicit DyadicField(lattice::LatticeWindow window) : window_(window), values_(window.site_count()) {}

  const lattice::LatticeWindow& window() const noexcept { return window_; }
  Dyadic& operator[](std::size_t i) { return values_[i]; }
  const Dyadic& operator[](std::size_t i) const { return values_[i]; }
  const Dyadic& at(const lattice::Site& j) const { return values_[window_.index(j)]; }

 private:
  lattice::LatticeWindow window_;
  std::vector<Dyadic> values_;
};

}  // namespace carleman::counterexample
