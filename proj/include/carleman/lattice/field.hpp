#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "carleman/lattice/window.hpp"
#include "carleman/numeric/log_scalar.hpp"
#include "carleman/numeric/quadrature.hpp"

namespace carleman::lattice {

using Complex = std::complex<double>;

/// One time slice of a complex field on a window.
class LatticeField {
 public:
  explicit LatticeField(LatticeWindow window);
  LatticeField(LatticeWindow window, std::vector<Complex> values);

  const LatticeWindow& window() const noexcept { return window_; }
  std::span<Complex> values() noexcept { return values_; }
  std::span<const Complex> values() const noexcept { return values_; }
  Complex& operator[](std::size_t i) noexcept { return values_[i]; }
  const Complex& operator[](std::size_t i) const noexcept { return values_[i]; }
  Complex& at(const Site& j) { return values_[window_.index(j)]; }
  Complex at(const Site& j) const { return values_[window_.index(j)]; }

  /// Site-wise |u|^2 summed in the fixed pairwise order.
  double norm2() const noexcept;

 private:
  LatticeWindow window_;
  std::vector<Complex> values_;
};

/// Field sampled at the nodes of a time rule, optionally with its closed-form
/// time derivative at the same nodes.
class SpaceTimeField {
 public:
  SpaceTimeField(LatticeWindow window, num::QuadratureRule rule, bool with_derivative = false);

  const LatticeWindow& window() const noexcept { return window_; }
  const num::QuadratureRule& time_rule() const noexcept { return rule_; }
  std::size_t node_count() const noexcept { return rule_.size(); }
  bool has_derivative() const noexcept { return !derivative_.empty(); }

  std::span<Complex> slice(std::size_t node) noexcept { return values_[node]; }
  std::span<const Complex> slice(std::size_t node) const noexcept { return values_[node]; }
  std::span<Complex> derivative(std::size_t node) { return derivative_.at(node); }
  std::span<const Complex> derivative(std::size_t node) const { return derivative_.at(node); }

  LatticeField slice_field(std::size_t node) const;

  /// Time-integrated squared l2 norm.
  double norm2() const noexcept;

 private:
  LatticeWindow window_;
  num::QuadratureRule rule_;
  std::vector<std::vector<Complex>> values_;
  std::vector<std::vector<Complex>> derivative_;
};

/// Potential on a window; sup_norm is the exact max of |V|.
class Potential {
 public:
  explicit Potential(LatticeWindow window);
  Potential(LatticeWindow window, std::vector<Complex> values);

  const LatticeWindow& window() const noexcept { return window_; }
  std::span<const Complex> values() const noexcept { return values_; }
  double sup_norm() const noexcept { return sup_; }
  bool is_real() const noexcept;
  bool is_zero() const noexcept { return sup_ == 0.0; }

 private:
  LatticeWindow window_;
  std::vector<Complex> values_;
  double sup_ = 0.0;
};

/// (Delta_d u)_j = sum_k (u_{j+e_k} + u_{j-e_k} - 2 u_j), zero outside the window.
LatticeField discrete_laplacian(const LatticeField& u);
void discrete_laplacian(std::span<const Complex> u, std::span<Complex> out, const LatticeWindow& w);

/// (Delta_d + V) u.
void apply_hamiltonian(std::span<const Complex> u, std::span<Complex> out, const Potential& V);

/// out_j = sum_k (u_{j+e_k} + u_{j-e_k}), zero padding.
void neighbor_sum(std::span<const Complex> u, std::span<Complex> out, const LatticeWindow& w);

/// ell^2 inner product sum_j a_j conj(b_j).
Complex inner(std::span<const Complex> a, std::span<const Complex> b) noexcept;

using SiteLogWeight = std::function<num::LogScalar(const Site&)>;
using SpaceTimeLogWeight = std::function<num::LogScalar(const Site&, double t)>;

/// sqrt(sum_j w_j^2 |u_j|^2) accumulated in the log domain.
num::LogScalar weighted_l2(const LatticeField& u, const SiteLogWeight& w);
/// sqrt(int sum_j w_j(t)^2 |u_j(t)|^2 dt) with the field's time rule.
num::LogScalar weighted_l2(const SpaceTimeField& u, const SpaceTimeLogWeight& w);

/// sqrt(sum over R-2 <= |j| <= R+1 of |u_j|^2); throws RingOutsideWindow if R+1 >= M.
num::LogScalar ring_mass(const LatticeField& u, double R);
/// Time-integrated version.
num::LogScalar ring_mass(const SpaceTimeField& u, double R);

/// Fraction of ||u||^2 carried by sites with max_k |j_k| > M - 2.
double boundary_mass_fraction(const LatticeField& u) noexcept;
double boundary_mass_fraction(const SpaceTimeField& u) noexcept;

inline constexpr double kBoundaryMassTolerance = 1e-12;

}  // namespace carleman::lattice
