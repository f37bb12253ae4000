#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "carleman/estimate/profiles.hpp"
#include "carleman/lattice/field.hpp"

namespace carleman::estimate {

using lattice::Complex;

/// A space-time function with a closed-form time derivative.
class JetSource {
 public:
  virtual ~JetSource() = default;
  virtual const lattice::LatticeWindow& window() const noexcept = 0;
  /// Writes f(t) and df/dt(t), one entry per window site.
  virtual void evaluate(double t, std::span<Complex> value, std::span<Complex> dt) const = 0;
};

/// Polynomial bump ((t - 1/8)(7/8 - t))^3 on [1/8, 7/8], zero elsewhere.
double bump(double t) noexcept;
double bump_d1(double t) noexcept;
inline constexpr double kBumpStart = 0.125;
inline constexpr double kBumpEnd = 0.875;

/// f_j(t) = sum_m bump(t) (t - 1/2)^m h^{(m)}_j.
class TensorTestFunction final : public JetSource {
 public:
  TensorTestFunction(lattice::LatticeWindow window, std::vector<std::vector<Complex>> spatial);

  /// Complex Gaussian coefficients on sites with max |j_k| <= M - inset.
  static TensorTestFunction random(const lattice::LatticeWindow& window, int terms, int inset, std::uint64_t seed);

  const lattice::LatticeWindow& window() const noexcept override { return window_; }
  void evaluate(double t, std::span<Complex> value, std::span<Complex> dt) const override;

 private:
  lattice::LatticeWindow window_;
  std::vector<std::vector<Complex>> spatial_;
};

/// g_j(t) = bump(t) mu(|j/R + phi(t) e_1|) xi_j with xi complex Gaussian.
/// Vanishes wherever |j/R + phi e_1| <= 1.
class AdmissibleField final : public JetSource {
 public:
  static AdmissibleField random(const lattice::LatticeWindow& window, const WeightSpec& spec, int inset,
                                std::uint64_t seed);

  const lattice::LatticeWindow& window() const noexcept override { return window_; }
  void evaluate(double t, std::span<Complex> value, std::span<Complex> dt) const override;

 private:
  AdmissibleField(lattice::LatticeWindow window, WeightSpec spec, std::vector<Complex> xi);

  lattice::LatticeWindow window_;
  WeightSpec spec_;
  std::vector<Complex> xi_;
};

/// Composite Gauss-Legendre rule with breaks at the corners of the bump and
/// of the plateau profile.
num::QuadratureRule check_time_rule(int nodes_per_piece = 16);

/// Samples value and derivative at the rule's nodes.
lattice::SpaceTimeField sample(const JetSource& f, const num::QuadratureRule& rule);

}  // namespace carleman::estimate
