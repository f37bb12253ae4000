#pragma once

#include <vector>

#include "carleman/evolution/evolve.hpp"
#include "carleman/report.hpp"

namespace carleman::experiments {

using BetaVector = std::vector<double>;  // one entry per axis

struct LogConvexityResult {
  std::vector<BetaVector> betas;
  std::vector<double> times;                 // interior snapshot times
  std::vector<std::vector<double>> log_rho;  // [beta][time]
  double max_log_rho = 0.0;
  double C_half = 0.0;  // max log rho / L over |beta|_inf <= beta_max / 2
  double C_full = 0.0;  // same over |beta|_inf <= beta_max
  double relative_change = 0.0;
  CheckReport report;
};

/// Betas t e_1 for t on a symmetric grid of spacing `step` in [-beta_max, beta_max].
std::vector<BetaVector> axis_betas(int d, double beta_max, double step);

/// rho(beta, t) = sum e^{2 beta.j} |u_j(t)|^2 / sum e^{2 beta.j} (|u_j(0)|^2 + |u_j(1)|^2)
/// at every interior uniform snapshot. With L = 0 the check is rho <= 1 + tol;
/// otherwise C_emp = max log rho / L must move by less than 20% from
/// beta_max / 2 to beta_max.
LogConvexityResult log_convexity_check(const evolution::Trajectory& traj, const std::vector<BetaVector>& betas,
                                       double L, double beta_max, double tolerance = 1e-10);

}  // namespace carleman::experiments
