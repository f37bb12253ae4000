#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "carleman/error.hpp"
#include "carleman/numeric/reduce.hpp"

namespace carleman::num {

/// Nodes and positive weights on [a, b]. Gauss-Legendre, possibly composite.
class QuadratureRule {
 public:
  /// n-point Gauss-Legendre rule on [a, b]; exact through degree 2n - 1.
  static QuadratureRule gauss_legendre(int n, double a = 0.0, double b = 1.0);

  /// n points on each piece [breaks[i], breaks[i+1]].
  static QuadratureRule composite(std::span<const double> breaks, int n_per_piece);

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double lower() const noexcept { return a_; }
  double upper() const noexcept { return b_; }
  /// Polynomial degree integrated exactly on every piece.
  int exact_degree() const noexcept { return degree_; }

  /// Same layout with each piece's node count doubled.
  QuadratureRule refined() const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> breaks_;
  double a_ = 0.0;
  double b_ = 0.0;
  int degree_ = 0;
  int per_piece_ = 0;
};

template <class T>
struct Integral {
  T value{};
  /// |I(rule) - I(rule refined)|.
  double error_estimate = 0.0;
};

namespace detail {
template <class T, class F>
T apply_rule(F&& f, const QuadratureRule& rule) {
  std::vector<T> terms(rule.size());
  const auto x = rule.nodes();
  const auto w = rule.weights();
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const T v = f(x[i]);
    if constexpr (std::is_same_v<T, double>) {
      if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "integrand not finite at node");
    } else {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw Error(ErrorKind::NonFinite, "integrand not finite at node");
    }
    terms[i] = w[i] * v;
  }
  return pairwise_sum(std::span<const T>(terms));
}
}  // namespace detail

/// Integrates f over the rule and estimates the error by node doubling.
/// T is double or std::complex<double>.
template <class T = double, class F>
Integral<T> integrate(F&& f, const QuadratureRule& rule) {
  Integral<T> out;
  out.value = detail::apply_rule<T>(f, rule);
  const T fine = detail::apply_rule<T>(f, rule.refined());
  out.error_estimate = std::abs(fine - out.value);
  out.value = fine;
  return out;
}

}  // namespace carleman::num
