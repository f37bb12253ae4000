#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "carleman/numeric/log_scalar.hpp"

namespace carleman::num {

/// Abscissa used to model -log lambda(R).
enum class DecayModel { RLogR, RSquared, RLinear };

std::string_view to_string(DecayModel m) noexcept;
DecayModel parse_decay_model(std::string_view name);
double model_abscissa(DecayModel m, double R) noexcept;

struct DecaySample {
  double R = 0.0;
  LogScalar lambda;
};

struct FitResult {
  double exponent_constant = 0.0;  // c in -log lambda = c m(R) + b
  double intercept = 0.0;
  double residual = 0.0;           // RMS of log residuals
  DecayModel model = DecayModel::RLogR;
};

/// Least squares fit of -log lambda(R) against the model abscissa.
/// Throws DegenerateFit for fewer than 3 rows or identical abscissae,
/// InvalidArgument if some lambda is not positive.
FitResult fit_decay(std::span<const DecaySample> rows, DecayModel model);

/// Ordinary least squares y = slope x + intercept; RMS residual in `residual`.
FitResult fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace carleman::num
