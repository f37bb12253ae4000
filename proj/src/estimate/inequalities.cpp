#include "carleman/estimate/inequalities.hpp"

#include <cmath>
#include <limits>

#include "carleman/error.hpp"
#include "carleman/numeric/log_scalar.hpp"

namespace carleman::estimate {

namespace {

double log_or_neg_inf(double x) { return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity(); }

// log sinh for x >= 0, with log sinh(0) = -inf.
double lsinh(double x) { return x > 0.0 ? num::log_sinh(x) : -std::numeric_limits<double>::infinity(); }

// Smallest c in [0, c_hi] with margin(c R log R) >= 0, by bisection.
template <class Margin>
double minimal_c(Margin&& margin, double R) {
  const double rlogr = R * std::log(R);
  // At alpha = 0 both sides vanish; the question is the limit alpha -> 0+.
  if (margin(1e-12 * rlogr) >= 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (margin(hi * rlogr) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw Error(ErrorKind::NonFinite, "hiding inequality never holds");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (margin(mid * rlogr) >= 0.0 ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

double hiding_margin_A(double alpha, double R, double s, double sup_d1) {
  if (sup_d1 == 0.0) return std::numeric_limits<double>::infinity();
  const double left = lsinh(2.0 * alpha / (R * R)) + 2.0 * lsinh(2.0 * alpha * s / R);
  const double right = log_or_neg_inf(8.0 * alpha * sup_d1 / R) + num::log_cosh(alpha / (R * R)) +
                       num::log_cosh(2.0 * alpha * s / R);
  if (right == -std::numeric_limits<double>::infinity()) return std::numeric_limits<double>::infinity();
  return left - right;
}

double hiding_margin_B(double alpha, double R, double s, double sup_d2) {
  if (sup_d2 == 0.0) return std::numeric_limits<double>::infinity();
  const double left = lsinh(2.0 * alpha / (R * R)) + 2.0 * lsinh(2.0 * alpha * s / R);
  const double right = log_or_neg_inf(2.0 * alpha * sup_d2 * s);
  if (right == -std::numeric_limits<double>::infinity()) return std::numeric_limits<double>::infinity();
  return left - right;
}

bool hiding_reduced_A_large(double alpha, double R, double s, double sup_d1) {
  return alpha / (R * R) + 2.0 * alpha * s / R >= log_or_neg_inf(16.0 * alpha / R * sup_d1);
}

bool hiding_reduced_A_small(double alpha, double R, double s, double sup_d1) {
  return 2.0 * alpha * s / R >= log_or_neg_inf(8.0 * R * sup_d1);
}

bool hiding_reduced_B_small(double c, double R, double s, double sup_d2) {
  return 4.0 * c * s * std::log(R) >= 2.0 * std::log(R) + log_or_neg_inf(sup_d2 * s);
}

std::vector<double> default_hiding_grid(double R, int points) {
  std::vector<double> grid;
  const double hi = 4.0 + 1.0 / R;
  for (int i = 0; i < points; ++i) grid.push_back(1.0 + (hi - 1.0) * i / (points - 1));
  return grid;
}

HidingResult hiding_inequalities(double R, const TimeProfile& phi, std::span<const double> grid) {
  if (!(R > 1.0)) throw Error(ErrorKind::InvalidArgument, "hiding scan needs R > 1");
  HidingResult out;
  out.R = R;
  out.sup_d1 = phi.sup_d1();
  out.sup_d2 = phi.sup_d2();
  for (double s : grid) {
    if (s < 1.0) throw Error(ErrorKind::InvalidArgument, "hiding grid values must be >= 1");
    HidingRow row{R, s, 0.0, 0.0};
    row.c_min_A = minimal_c([&](double a) { return hiding_margin_A(a, R, s, out.sup_d1); }, R);
    row.c_min_B = minimal_c([&](double a) { return hiding_margin_B(a, R, s, out.sup_d2); }, R);
    out.c_min_A = std::max(out.c_min_A, row.c_min_A);
    out.c_min_B = std::max(out.c_min_B, row.c_min_B);
    out.rows.push_back(row);
  }
  out.c_min = std::max(out.c_min_A, out.c_min_B);
  const double alpha = out.c_min * R * std::log(R);
  out.holds_at_c_min = true;
  for (double s : grid) {
    if (hiding_margin_A(alpha, R, s, out.sup_d1) < 0.0 || hiding_margin_B(alpha, R, s, out.sup_d2) < 0.0)
      out.holds_at_c_min = false;
  }
  return out;
}

CheckReport hiding_scan(std::span<const double> R_list, const TimeProfile& phi, double monotone_from,
                        std::vector<HidingResult>* results) {
  CheckReport rep;
  rep.check = "hiding_inequalities";
  rep.params = {{"R_list", std::vector<double>(R_list.begin(), R_list.end())},
                {"phi", std::string(to_string(phi.kind()))},
                {"monotone_from", monotone_from}};
  std::vector<HidingResult> all;
  for (double R : R_list) all.push_back(hiding_inequalities(R, phi, default_hiding_grid(R)));
  bool holds = true, monotone = true;
  double prev = std::numeric_limits<double>::infinity();
  nlohmann::json per_R = nlohmann::json::array();
  for (const auto& h : all) {
    holds = holds && h.holds_at_c_min;
    if (h.R >= monotone_from) {
      if (h.c_min > prev) monotone = false;
      prev = h.c_min;
    }
    per_R.push_back({{"R", h.R}, {"c_min_A", h.c_min_A}, {"c_min_B", h.c_min_B}, {"c_min", h.c_min},
                     {"holds_at_c_min", h.holds_at_c_min}});
  }
  rep.details["per_R"] = per_R;
  rep.details["sup_d1"] = phi.sup_d1();
  rep.details["sup_d2"] = phi.sup_d2();
  rep.details["holds_at_c_min"] = holds;
  rep.details["nonincreasing"] = monotone;
  rep.pass = holds && monotone;
  rep.defect = rep.pass ? 0.0 : 1.0;
  rep.tolerance = 0.0;
  if (results) *results = std::move(all);
  return rep;
}

double absorption_log_lhs(double alpha, double R, int d) {
  return lsinh(2.0 * alpha / (R * R)) + 2.0 * lsinh(2.0 * alpha / (std::sqrt(static_cast<double>(d)) * R));
}

bool absorption_threshold(double alpha, double R, double L, int d) {
  if (!(alpha > 0.0) || !(R > 0.0) || !(L > 0.0) || d < 1)
    throw Error(ErrorKind::InvalidArgument, "absorption threshold needs positive arguments");
  return absorption_log_lhs(alpha, R, d) >= 2.0 * std::log(L);
}

std::string_view to_string(PhiGrowth g) noexcept { return g == PhiGrowth::Log ? "log" : "sqrt_log"; }

PhiGrowth parse_phi_growth(std::string_view s) {
  if (s == "log") return PhiGrowth::Log;
  if (s == "sqrt_log") return PhiGrowth::SqrtLog;
  throw Error(ErrorKind::InvalidArgument, "unknown phi growth '" + std::string(s) + "'");
}

double phi_growth_value(PhiGrowth g, double R) noexcept {
  return g == PhiGrowth::Log ? std::log(R) : std::sqrt(std::log(R));
}

ThresholdScan phi_rate_scan(PhiGrowth growth, double c, double L, int d, std::span<const double> R_list) {
  ThresholdScan out;
  for (double R : R_list) {
    ThresholdRow row;
    row.R = R;
    row.phi = phi_growth_value(growth, R);
    row.alpha = c * R * row.phi;
    row.log_lhs = absorption_log_lhs(row.alpha, R, d);
    row.log_rhs = 2.0 * std::log(L);
    row.pass = absorption_threshold(row.alpha, R, L, d);
    out.rows.push_back(row);
  }
  out.R0 = std::numeric_limits<double>::quiet_NaN();
  out.all_fail = !out.rows.empty();
  for (std::size_t i = out.rows.size(); i-- > 0;) {
    if (!out.rows[i].pass) break;
    out.R0 = out.rows[i].R;
  }
  for (const auto& r : out.rows) out.all_fail = out.all_fail && !r.pass;
  return out;
}

double growth_factor_log(double c, double R, int d) {
  return 0.5 * std::log(2.0 * c * std::log(R)) + (2.0 * c / std::sqrt(static_cast<double>(d)) - 0.5) * std::log(R);
}

}  // namespace carleman::estimate
