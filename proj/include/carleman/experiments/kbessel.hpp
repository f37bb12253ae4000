#pragma once

#include <vector>

#include "carleman/numeric/log_scalar.hpp"
#include "carleman/report.hpp"

namespace carleman::experiments {

/// int_R e^{j b - 2 cosh(b/mu)/e} db by quadrature about the peak, as a log.
num::LogScalar k_weight_integral(double j, double mu);

struct KBesselResult {
  double mu = 0.0;
  double constant = 0.0;  // integral at j = 0 over K_0(2/e)
  std::vector<int> j;
  std::vector<double> rel_defect;
  std::vector<int> growth_j;
  double growth_coefficient = 0.0;  // a in log I(j) ~ j (a log j + b)
  CheckReport report;
};

/// Fixes the constant from j = 0, then checks I(j) = constant K_{mu j}(2/e)
/// on j_list and fits the growth over growth_list.
KBesselResult k_bessel_weight_check(double mu, const std::vector<int>& j_list, const std::vector<int>& growth_list,
                                    double tolerance = 1e-8);

}  // namespace carleman::experiments
