#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "carleman/experiments/config.hpp"
#include "carleman/numeric/fit.hpp"

namespace carleman::experiments {

struct ScanRow {
  double R = 0.0;
  num::LogScalar lambda;
  double alpha = 0.0;
  num::LogScalar lhs_growth;     // sqrt(sinh(2a/R^2)) sinh(2a/(sqrt(d) R))
  double log_growth_asymptotic = 0.0;
  bool pass_absorption = false;  // sinh(2a/R^2) sinh^2(2a/(sqrt(d) R)) >= L^2
  bool pass_lower_bound = false; // lambda >= exp(-c_fit R log R)
  // Bound chain with c_d = 1, all as logs:
  //   growth e^{a(2+1/R)^2}  vs  e^{a(4+1/R)^2} lambda + e^{a(2+1/R)^2} A
  double log_chain_lhs = 0.0;
  double log_lambda_term = 0.0;
  double log_A_term = 0.0;
  bool chain_holds = false;
  double boundary_mass = 0.0;
};

struct LambdaScan {
  std::vector<ScanRow> rows;
  /// No positive ring mass to fit (e.g. u = 0).
  bool vacuous = false;
  std::vector<num::FitResult> fits;  // R log R, R^2, R
  num::DecayModel best_model = num::DecayModel::RLogR;
  double c_fit = 0.0;                // slope of the R log R model

  const num::FitResult& fit(num::DecayModel m) const;
  nlohmann::json to_json() const;
  /// Columns R, log_lambda, alpha, log_lhs_growth, pass_absorption, boundary_mass.
  std::string to_tsv() const;
};

/// Time-integrated ring masses of a (normalized) trajectory.
LambdaScan lambda_scan(const evolution::Trajectory& traj, const ExperimentConfig& cfg);
/// Stationary ring masses.
LambdaScan lambda_scan(const lattice::LatticeField& u, const ExperimentConfig& cfg);

/// Evolves delta_0 freely (or under a seeded potential of sup cfg.L) and
/// normalizes; the trajectory behind the decay-model experiments.
evolution::Trajectory reference_trajectory(const ExperimentConfig& cfg, const lattice::LatticeField& u0);

}  // namespace carleman::experiments
