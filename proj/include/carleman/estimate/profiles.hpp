#pragma once

#include <string_view>

#include "carleman/lattice/window.hpp"
#include "carleman/numeric/log_scalar.hpp"

namespace carleman::estimate {

/// C-infinity step: 0 for s <= 0, 1 for s >= 1,
/// e^{-1/s} / (e^{-1/s} + e^{-1/(1-s)}) in between.
double smooth_step(double s) noexcept;
double smooth_step_d1(double s) noexcept;
double smooth_step_d2(double s) noexcept;

enum class ProfileKind { Plateau, Constant, Zero };

std::string_view to_string(ProfileKind k) noexcept;

/// phi(t) on [0, 1] with closed-form derivatives.
///
/// Plateau is 0 on [0,1/4] and [3/4,1], 3 on [3/8,5/8], and glued with
/// smooth_step on the two transition intervals.
class TimeProfile {
 public:
  static TimeProfile paper_phi();
  static TimeProfile constant(double c);
  static TimeProfile zero() { return constant(0.0); }

  ProfileKind kind() const noexcept { return kind_; }
  double constant_value() const noexcept { return c_; }

  double value(double t) const noexcept;
  double d1(double t) const noexcept;
  double d2(double t) const noexcept;

  /// sup |phi'| and sup |phi''| over [0, 1], located once at construction.
  double sup_d1() const noexcept { return sup_d1_; }
  double sup_d2() const noexcept { return sup_d2_; }

 private:
  TimeProfile(ProfileKind kind, double c);

  ProfileKind kind_;
  double c_ = 0.0;
  double sup_d1_ = 0.0;
  double sup_d2_ = 0.0;
};

/// Radial cutoffs: theta^R is 1 on |x| <= R-1 and 0 on |x| >= R; mu is 0 on
/// |x| <= 1 and 1 on |x| >= 2. Both use smooth_step on the transition.
struct CutoffSet {
  double R = 1.0;

  double theta(double r) const noexcept { return smooth_step(R - r); }
  double mu(double r) const noexcept { return smooth_step(r - 1.0); }
  double mu_d1(double r) const noexcept { return smooth_step_d1(r - 1.0); }
  static constexpr std::string_view smoothing_tag = "exp_step";
};

struct WeightSpec {
  double alpha = 0.0;
  double R = 1.0;
  TimeProfile phi = TimeProfile::paper_phi();
  int d = 1;

  /// alpha = c R log R.
  static WeightSpec from_rule(double c, double R, int d, TimeProfile phi = TimeProfile::paper_phi());

  /// True when alpha >= c R log R.
  bool in_evolution_regime(double c) const noexcept;

  void validate() const;
};

/// alpha |j/R + phi(t) e_1|^2
double weight_exponent(const lattice::Site& j, double t, const WeightSpec& spec) noexcept;
/// e^{alpha |j/R + phi(t) e_1|^2}
num::LogScalar weight_at(const lattice::Site& j, double t, const WeightSpec& spec) noexcept;

/// |j/R + phi e_1| for a given phi value.
double shifted_radius(const lattice::Site& j, double phi, double R, int d) noexcept;

}  // namespace carleman::estimate
