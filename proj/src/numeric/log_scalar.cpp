#include "carleman/numeric/log_scalar.hpp"

#include "carleman/error.hpp"

namespace carleman::num {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

LogScalar tree_sum(std::span<const LogScalar> t) noexcept {
  if (t.empty()) return LogScalar::zero();
  if (t.size() == 1) return t[0];
  const std::size_t half = t.size() / 2;
  return tree_sum(t.first(half)) + tree_sum(t.subspan(half));
}

LogScalar tree_sum_exp(std::span<const double> t) noexcept {
  if (t.empty()) return LogScalar::zero();
  if (t.size() == 1) return LogScalar::from_log(t[0]);
  const std::size_t half = t.size() / 2;
  return tree_sum_exp(t.first(half)) + tree_sum_exp(t.subspan(half));
}
}  // namespace

LogScalar LogScalar::from_log(double log_mag, int sign) noexcept {
  LogScalar r;
  if (sign == 0 || log_mag == kNegInf) return r;
  r.log_mag_ = log_mag;
  r.sign_ = sign > 0 ? 1 : -1;
  return r;
}

LogScalar LogScalar::from_double(double x) noexcept {
  if (x == 0.0) return {};
  return from_log(std::log(std::fabs(x)), x > 0 ? 1 : -1);
}

double LogScalar::to_double() const noexcept {
  if (sign_ == 0) return 0.0;
  return sign_ * std::exp(log_mag_);
}

LogScalar LogScalar::sqrt() const {
  if (sign_ < 0) throw Error(ErrorKind::InvalidArgument, "sqrt of negative LogScalar");
  return from_log(0.5 * log_mag_, sign_);
}

LogScalar LogScalar::pow(double p) const {
  if (sign_ < 0) throw Error(ErrorKind::InvalidArgument, "pow of negative LogScalar");
  if (sign_ == 0) return p == 0.0 ? one() : zero();
  return from_log(p * log_mag_);
}

LogScalar operator/(LogScalar a, LogScalar b) {
  if (b.sign_ == 0) throw Error(ErrorKind::NonFinite, "LogScalar division by zero");
  return LogScalar::from_log(a.log_mag_ - b.log_mag_, a.sign_ * b.sign_);
}

LogScalar operator+(LogScalar a, LogScalar b) noexcept {
  if (a.sign_ == 0) return b;
  if (b.sign_ == 0) return a;
  if (a.log_mag_ < b.log_mag_) std::swap(a, b);
  const double gap = b.log_mag_ - a.log_mag_;  // <= 0
  if (a.sign_ == b.sign_) return LogScalar::from_log(a.log_mag_ + std::log1p(std::exp(gap)), a.sign_);
  if (gap == 0.0) return LogScalar::zero();
  return LogScalar::from_log(a.log_mag_ + std::log1p(-std::exp(gap)), a.sign_);
}

bool operator<(LogScalar a, LogScalar b) noexcept {
  if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
  if (a.sign_ == 0) return false;
  return a.sign_ > 0 ? a.log_mag_ < b.log_mag_ : a.log_mag_ > b.log_mag_;
}

LogScalar log_sum(std::span<const LogScalar> terms) noexcept { return tree_sum(terms); }

LogScalar log_sum_exp(std::span<const double> log_terms) noexcept { return tree_sum_exp(log_terms); }

double log_sinh(double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::InvalidArgument, "log_sinh requires x > 0");
  if (x < 20.0) return std::log(std::sinh(x));
  return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x));
}

double log_cosh(double x) noexcept {
  x = std::fabs(x);
  return x - std::log(2.0) + std::log1p(std::exp(-2.0 * x));
}

}  // namespace carleman::num
