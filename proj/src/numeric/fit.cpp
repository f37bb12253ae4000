#include "carleman/numeric/fit.hpp"

#include <cmath>
#include <string>

#include "carleman/error.hpp"
#include "carleman/numeric/reduce.hpp"

namespace carleman::num {

std::string_view to_string(DecayModel m) noexcept {
  switch (m) {
    case DecayModel::RLogR: return "R_logR";
    case DecayModel::RSquared: return "R_sq";
    case DecayModel::RLinear: return "R_linear";
  }
  return "?";
}

DecayModel parse_decay_model(std::string_view name) {
  if (name == "R_logR") return DecayModel::RLogR;
  if (name == "R_sq") return DecayModel::RSquared;
  if (name == "R_linear") return DecayModel::RLinear;
  throw Error(ErrorKind::InvalidArgument, "unknown decay model '" + std::string(name) + "'");
}

double model_abscissa(DecayModel m, double R) noexcept {
  switch (m) {
    case DecayModel::RLogR: return R * std::log(R);
    case DecayModel::RSquared: return R * R;
    case DecayModel::RLinear: return R;
  }
  return R;
}

FitResult fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 3 || y.size() != n) throw Error(ErrorKind::DegenerateFit, "need at least 3 points");
  const double xm = pairwise_sum(x) / n;
  const double ym = pairwise_sum(y) / n;
  std::vector<double> sxx(n), sxy(n);
  for (std::size_t i = 0; i < n; ++i) {
    sxx[i] = (x[i] - xm) * (x[i] - xm);
    sxy[i] = (x[i] - xm) * (y[i] - ym);
  }
  const double denom = pairwise_sum(sxx);
  if (!(denom > 0.0)) throw Error(ErrorKind::DegenerateFit, "all abscissae equal");
  FitResult r;
  r.exponent_constant = pairwise_sum(sxy) / denom;
  r.intercept = ym - r.exponent_constant * xm;
  std::vector<double> res2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (r.exponent_constant * x[i] + r.intercept);
    res2[i] = e * e;
  }
  r.residual = std::sqrt(pairwise_sum(res2) / n);
  return r;
}

FitResult fit_decay(std::span<const DecaySample> rows, DecayModel model) {
  if (rows.size() < 3) throw Error(ErrorKind::DegenerateFit, "need at least 3 rows");
  std::vector<double> x, y;
  for (const auto& row : rows) {
    if (row.lambda.sign() <= 0) throw Error(ErrorKind::InvalidArgument, "lambda must be positive");
    x.push_back(model_abscissa(model, row.R));
    y.push_back(-row.lambda.log_mag());
  }
  FitResult r = fit_line(x, y);
  r.model = model;
  return r;
}

}  // namespace carleman::num
