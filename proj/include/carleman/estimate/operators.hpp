#pragma once

#include <vector>

#include "carleman/estimate/profiles.hpp"
#include "carleman/lattice/field.hpp"
#include "carleman/numeric/double_double.hpp"

namespace carleman::estimate {

// Conjugated operators of e^{W} (i d/dt + Delta_d) e^{-W}, W = alpha |j/R + phi e_1|^2.
// With a_k(c) = (2 alpha / R)((c + 1/2)/R + phi delta_{1k}):
//   S f_j = i f'_j - 2d f_j + sum_k cosh(a_k(j_k)) f_{j+e_k} + cosh(a_k(j_k - 1)) f_{j-e_k}
//   A f_j = -2i alpha (j_1/R + phi) phi' f_j
//           - sum_k sinh(a_k(j_k)) f_{j+e_k} + sinh(a_k(j_k - 1)) f_{j-e_k}
// The coefficients reach e^{40} while S f + A f can be e^{-40} smaller, so
// everything is carried in double-double and rounded only on output.

/// S f on every node of f's time rule. f must carry its time derivative.
lattice::SpaceTimeField apply_S(const lattice::SpaceTimeField& f, const WeightSpec& spec);
/// A f; carries d/dt (A f) when f carries f'.
lattice::SpaceTimeField apply_A(const lattice::SpaceTimeField& f, const WeightSpec& spec);

namespace detail {

using FieldDD = std::vector<num::ComplexDD>;

FieldDD to_dd(std::span<const lattice::Complex> f);
std::vector<lattice::Complex> to_complex(const FieldDD& f);

/// The operators frozen at one time t.
class OperatorsAt {
 public:
  OperatorsAt(const WeightSpec& spec, const lattice::LatticeWindow& window, double t);

  /// S f given f and f'.
  void S(const FieldDD& f, const FieldDD& ft, FieldDD& out) const;
  /// A f.
  void A(const FieldDD& f, FieldDD& out) const;
  /// d/dt (A f) given f and f'.
  void A_dt(const FieldDD& f, const FieldDD& ft, FieldDD& out) const;

  /// cosh and sinh of a_k(c), and their time derivatives.
  num::DoubleDouble cosh_a(int axis, int c) const { return table(axis).c[slot(c)]; }
  num::DoubleDouble sinh_a(int axis, int c) const { return table(axis).s[slot(c)]; }

  double phi() const noexcept { return phi_; }
  double phi_d1() const noexcept { return dphi_; }
  double phi_d2() const noexcept { return ddphi_; }
  /// j_1/R + phi in double-double.
  num::DoubleDouble shifted_first(int j1) const;

  const lattice::LatticeWindow& window() const noexcept { return window_; }
  const WeightSpec& spec() const noexcept { return spec_; }

 private:
  struct AxisTable {
    std::vector<num::DoubleDouble> c, s, dc, ds;
  };
  const AxisTable& table(int axis) const { return axes_[axis]; }
  std::size_t slot(int c) const { return static_cast<std::size_t>(c + window_.half_width() + 1); }

  WeightSpec spec_;
  lattice::LatticeWindow window_;
  double phi_, dphi_, ddphi_;
  std::vector<AxisTable> axes_;
};

}  // namespace detail

}  // namespace carleman::estimate
