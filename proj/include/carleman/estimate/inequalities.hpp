#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "carleman/estimate/profiles.hpp"
#include "carleman/report.hpp"

namespace carleman::estimate {

// Pointwise inequalities that let the profile terms of the commutator be
// absorbed, for s = |j/R + phi| >= 1 (d = 1 reduction):
//   A: sinh(2a/R^2) sinh^2(2a s/R) >= (8 a sup|phi'| / R) cosh(a/R^2) cosh(2a s/R)
//   B: sinh(2a/R^2) sinh^2(2a s/R) >= 2 a sup|phi''| s
// Both sides are compared as logs.

/// log(left) - log(right); >= 0 means the inequality holds.
double hiding_margin_A(double alpha, double R, double s, double sup_d1);
double hiding_margin_B(double alpha, double R, double s, double sup_d2);

/// Reduced forms quoted for the two alpha regimes.
bool hiding_reduced_A_large(double alpha, double R, double s, double sup_d1);  // e^{a/R^2 + 2as/R} >= 16 (a/R) sup|phi'|
bool hiding_reduced_A_small(double alpha, double R, double s, double sup_d1);  // e^{2as/R} >= 8 R sup|phi'|
bool hiding_reduced_B_small(double c, double R, double s, double sup_d2);      // R^{4cs} >= R^2 sup|phi''| s

/// 200 evenly spaced s in [1, 4 + 1/R].
std::vector<double> default_hiding_grid(double R, int points = 200);

struct HidingRow {
  double R = 0.0;
  double s = 0.0;
  double c_min_A = 0.0;  // smallest c in alpha = c R log R with A holding at s
  double c_min_B = 0.0;
};

struct HidingResult {
  double R = 0.0;
  double sup_d1 = 0.0;
  double sup_d2 = 0.0;
  std::vector<HidingRow> rows;
  double c_min_A = 0.0;  // max over the grid
  double c_min_B = 0.0;
  double c_min = 0.0;    // max of the two
  bool holds_at_c_min = false;  // both inequalities re-evaluated at c_min on every grid point
};

/// Minimal rule constants over the grid. Both margins increase with alpha, so
/// each grid point is a bisection.
HidingResult hiding_inequalities(double R, const TimeProfile& phi, std::span<const double> grid);

/// Hiding scan over several R; the report passes when every R holds at its
/// own c_min and c_min is nonincreasing from `monotone_from` on.
CheckReport hiding_scan(std::span<const double> R_list, const TimeProfile& phi, double monotone_from,
                        std::vector<HidingResult>* results = nullptr);

/// log of sinh(2a/R^2) sinh^2(2a/(sqrt(d) R)).
double absorption_log_lhs(double alpha, double R, int d);
/// sinh(2a/R^2) sinh^2(2a/(sqrt(d) R)) >= L^2.
bool absorption_threshold(double alpha, double R, double L, int d);

enum class PhiGrowth { SqrtLog, Log };
std::string_view to_string(PhiGrowth g) noexcept;
PhiGrowth parse_phi_growth(std::string_view s);
double phi_growth_value(PhiGrowth g, double R) noexcept;

struct ThresholdRow {
  double R = 0.0;
  double phi = 0.0;
  double alpha = 0.0;
  double log_lhs = 0.0;
  double log_rhs = 0.0;  // 2 log L
  bool pass = false;
};

struct ThresholdScan {
  std::vector<ThresholdRow> rows;
  /// Smallest listed R from which every later row passes; NaN when the
  /// last row fails.
  double R0 = 0.0;
  bool all_fail = false;
};

/// alpha = c R phi(R) for each R.
ThresholdScan phi_rate_scan(PhiGrowth growth, double c, double L, int d, std::span<const double> R_list);

/// Log of the large-R growth factor sqrt(2c log R) R^{2c/sqrt(d) - 1/2}.
double growth_factor_log(double c, double R, int d);

}  // namespace carleman::estimate
