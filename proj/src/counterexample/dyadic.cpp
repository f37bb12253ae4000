#include "carleman/counterexample/dyadic.hpp"

#include <cmath>

namespace carleman::counterexample {

namespace {

int trailing_zeros(const Integer& m) { return static_cast<int>(boost::multiprecision::lsb(boost::multiprecision::abs(m))); }

}  // namespace

Dyadic::Dyadic(Integer mantissa, int exponent) : m_(std::move(mantissa)), e_(exponent) { normalize(); }

void Dyadic::normalize() {
  if (m_ == 0) {
    e_ = 0;
    return;
  }
  const int z = trailing_zeros(m_);
  if (z > 0) {
    m_ >>= z;  // exact: the low z bits are zero
    e_ += z;
  }
}

Dyadic Dyadic::pow2(int e, int sign) { return Dyadic(Integer(sign < 0 ? -1 : 1), e); }

std::optional<Dyadic> Dyadic::from_rational(const Rational& q) {
  const Integer num = boost::multiprecision::numerator(q);
  const Integer den = boost::multiprecision::denominator(q);
  if (num == 0) return Dyadic();
  const int z = trailing_zeros(den);
  if ((den >> z) != 1) return std::nullopt;
  return Dyadic(num, -z);
}

bool Dyadic::is_signed_power() const { return boost::multiprecision::abs(m_) == 1; }

Rational Dyadic::to_rational() const {
  if (e_ >= 0) return Rational(m_ << e_);
  return Rational(m_, Integer(1) << -e_);
}

double Dyadic::to_double() const { return std::ldexp(static_cast<double>(m_), e_); }

std::string Dyadic::to_string() const {
  if (m_ == 0) return "0";
  if (m_ == 1) return "2^" + std::to_string(e_);
  if (m_ == -1) return "-2^" + std::to_string(e_);
  return m_.str() + "*2^" + std::to_string(e_);
}

nlohmann::json Dyadic::to_json() const {
  return {{"sign", sign()}, {"mantissa", Integer(boost::multiprecision::abs(m_)).str()}, {"exponent", e_}};
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const int e = std::min(a.e_, b.e_);
  return Dyadic((a.m_ << (a.e_ - e)) + (b.m_ << (b.e_ - e)), e);
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) { return Dyadic(a.m_ * b.m_, a.e_ + b.e_); }

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  const Dyadic d = a - b;
  return d.sign() <=> 0;
}

Dyadic abs(const Dyadic& a) { return a.sign() < 0 ? -a : a; }

}  // namespace carleman::counterexample
