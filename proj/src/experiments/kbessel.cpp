#include "carleman/experiments/kbessel.hpp"

#include <cmath>
#include <numbers>

#include "carleman/error.hpp"
#include "carleman/numeric/fit.hpp"
#include "carleman/numeric/quadrature.hpp"
#include "carleman/special/bessel.hpp"

namespace carleman::experiments {

namespace {

constexpr double kTwoOverE = 2.0 / std::numbers::e;

}  // namespace

num::LogScalar k_weight_integral(double j, double mu) {
  if (!(mu > 0.0)) throw Error(ErrorKind::InvalidArgument, "mu must be positive");
  auto f = [&](double b) { return j * b - kTwoOverE * std::cosh(b / mu); };
  // f' = j - (2/(e mu)) sinh(b/mu) vanishes at the peak; f is concave.
  const double peak = mu * std::asinh(j * mu / kTwoOverE);
  const double fpeak = f(peak);
  const double width = mu / std::sqrt(kTwoOverE * std::cosh(peak / mu));
  auto edge = [&](double dir) {
    double b = peak;
    double step = width;
    while (f(b) - fpeak > -60.0) {
      b += dir * step;
      step *= 1.5;
    }
    return b;
  };
  const double lo = edge(-1.0), hi = edge(1.0);
  std::vector<double> breaks;
  const int pieces = 48;
  for (int i = 0; i <= pieces; ++i) breaks.push_back(lo + (hi - lo) * i / pieces);
  const auto rule = num::QuadratureRule::composite(breaks, 16);
  const auto I = num::integrate<double>([&](double b) { return std::exp(f(b) - fpeak); }, rule);
  return num::LogScalar::from_log(fpeak + std::log(I.value));
}

KBesselResult k_bessel_weight_check(double mu, const std::vector<int>& j_list, const std::vector<int>& growth_list,
                                    double tolerance) {
  KBesselResult res;
  res.mu = mu;
  res.constant = k_weight_integral(0.0, mu).to_double() / special::bessel_k(0.0, kTwoOverE).to_double();
  double worst = 0.0;
  for (int j : j_list) {
    const auto lhs = k_weight_integral(j, mu);
    const auto rhs = num::LogScalar::from_double(res.constant) * special::bessel_k(mu * j, kTwoOverE);
    const double rel = std::abs(std::expm1(rhs.log_mag() - lhs.log_mag()));
    res.j.push_back(j);
    res.rel_defect.push_back(rel);
    worst = std::max(worst, rel);
  }
  std::vector<double> x, y;
  for (int j : growth_list) {
    res.growth_j.push_back(j);
    x.push_back(std::log(double(std::abs(j))));
    y.push_back(k_weight_integral(j, mu).log_mag() / std::abs(j));
  }
  if (x.size() >= 3) res.growth_coefficient = num::fit_line(x, y).exponent_constant;
  const double growth_error = x.size() >= 3 ? std::abs(res.growth_coefficient - mu) / mu : 0.0;

  auto& rep = res.report;
  rep.check = "k_bessel_weight";
  rep.params = {{"mu", mu}, {"j", j_list}, {"growth_j", growth_list}};
  rep.defect = worst;
  rep.tolerance = tolerance;
  rep.pass = worst < tolerance && growth_error < 0.1;
  rep.details = {{"constant", res.constant},
                 {"constant_over_2mu", res.constant / (2.0 * mu)},
                 {"rel_defect", res.rel_defect},
                 {"growth_coefficient", res.growth_coefficient},
                 {"growth_relative_error", growth_error}};
  return res;
}

}  // namespace carleman::experiments
