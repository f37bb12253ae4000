#pragma once

#include "carleman/experiments/lambda_scan.hpp"
#include "carleman/report.hpp"

namespace carleman::experiments {

struct UniquenessResult {
  double mu = 0.0;
  bool hypothesis_met = false;  // mu > 0 and S_mu(0), S_mu(1) converge on the window
  LambdaScan scan;
  double c_low = 0.0;           // lambda >= e^{-c_low R log R} (fitted)
  double c0 = 0.0;              // largest grid c0 with the weighted-sum bound holding
  double mu_c0 = 0.0;           // upper-bound rate lambda <= C e^{-mu c0 R log R}
  double critical_ratio = 0.0;  // c_low / c0: mu beyond this contradicts the lower bound
  bool contradiction = false;
  CheckReport report;
};

/// Evolves bessel_like(mu) data, fits the lower-bound constant from the
/// lambda scan and the upper-bound constant from the weighted sums.
UniquenessResult weighted_uniqueness_threshold(const ExperimentConfig& cfg);

/// Decay constant of the frozen field e^{-mu |j| log(|j|+1)} from its ring sums.
double frozen_decay_constant(double mu, int d, const std::vector<double>& R_list);

}  // namespace carleman::experiments
