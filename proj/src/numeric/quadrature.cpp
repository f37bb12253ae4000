#include "carleman/numeric/quadrature.hpp"

#include <map>
#include <mutex>
#include <numbers>

namespace carleman::num {

namespace {

struct Reference {
  std::vector<double> x;  // on [-1, 1]
  std::vector<double> w;
};

Reference compute_reference(int n) {
  Reference r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) {
        // One more pass at the converged point for the derivative.
        p0 = 1.0;
        p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        break;
      }
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

const Reference& reference(int n) {
  static std::mutex mu;
  static std::map<int, Reference> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_reference(n)).first;
  return it->second;
}

}  // namespace

QuadratureRule QuadratureRule::gauss_legendre(int n, double a, double b) {
  const double breaks[2] = {a, b};
  return composite(breaks, n);
}

QuadratureRule QuadratureRule::composite(std::span<const double> breaks, int n_per_piece) {
  if (n_per_piece < 1 || breaks.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "quadrature needs n >= 1 and at least one piece");
  const Reference& ref = reference(n_per_piece);
  QuadratureRule rule;
  rule.breaks_.assign(breaks.begin(), breaks.end());
  rule.a_ = breaks.front();
  rule.b_ = breaks.back();
  rule.degree_ = 2 * n_per_piece - 1;
  rule.per_piece_ = n_per_piece;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double lo = breaks[p];
    const double hi = breaks[p + 1];
    if (!(hi > lo)) throw Error(ErrorKind::InvalidArgument, "quadrature breaks must increase");
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (int i = 0; i < n_per_piece; ++i) {
      rule.nodes_.push_back(mid + half * ref.x[i]);
      rule.weights_.push_back(half * ref.w[i]);
    }
  }
  return rule;
}

QuadratureRule QuadratureRule::refined() const { return composite(breaks_, 2 * per_piece_); }

}  // namespace carleman::num
