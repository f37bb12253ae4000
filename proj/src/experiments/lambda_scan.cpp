#include "carleman/experiments/lambda_scan.hpp"

#include <cmath>
#include <cstdio>

#include "carleman/error.hpp"
#include "carleman/estimate/inequalities.hpp"
#include "carleman/evolution/data.hpp"
#include "carleman/parallel.hpp"

namespace carleman::experiments {

namespace {

using num::LogScalar;

ScanRow make_row(double R, LogScalar lambda, const ExperimentConfig& cfg) {
  ScanRow row;
  row.R = R;
  row.lambda = lambda;
  row.alpha = cfg.c_rule * R * std::log(R);
  const double a = row.alpha;
  const double log_lhs = 0.5 * num::log_sinh(2.0 * a / (R * R)) + num::log_sinh(2.0 * a / (std::sqrt(double(cfg.d)) * R));
  row.lhs_growth = LogScalar::from_log(log_lhs);
  row.log_growth_asymptotic = estimate::growth_factor_log(cfg.c_rule, R, cfg.d);
  row.pass_absorption = cfg.L == 0.0 || estimate::absorption_threshold(a, R, cfg.L, cfg.d);
  const double inner = (2.0 + 1.0 / R) * (2.0 + 1.0 / R);
  const double outer = (4.0 + 1.0 / R) * (4.0 + 1.0 / R);
  row.log_chain_lhs = log_lhs + a * inner;
  row.log_lambda_term = a * outer + lambda.log_mag();
  row.log_A_term = a * inner + std::log(cfg.A);
  const double rhs[2] = {row.log_lambda_term, row.log_A_term};
  row.chain_holds = row.log_chain_lhs <= num::log_sum_exp(rhs).log_mag();
  return row;
}

void finish(LambdaScan& scan) {
  std::vector<num::DecaySample> samples;
  for (const auto& r : scan.rows) {
    if (r.lambda.is_zero()) {
      scan.vacuous = true;
      return;
    }
    samples.push_back({r.R, r.lambda});
  }
  if (samples.size() < 3) {
    scan.vacuous = true;
    return;
  }
  for (auto m : {num::DecayModel::RLogR, num::DecayModel::RSquared, num::DecayModel::RLinear})
    scan.fits.push_back(num::fit_decay(samples, m));
  scan.best_model = scan.fits.front().model;
  double best = scan.fits.front().residual;
  for (const auto& f : scan.fits)
    if (f.residual < best) {
      best = f.residual;
      scan.best_model = f.model;
    }
  scan.c_fit = scan.fits.front().exponent_constant;
  for (auto& r : scan.rows) r.pass_lower_bound = r.lambda.log_mag() >= -scan.c_fit * r.R * std::log(r.R);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json log_json(double x) {
  if (std::isfinite(x)) return x;
  return x < 0 ? "-inf" : "inf";
}

}  // namespace

const num::FitResult& LambdaScan::fit(num::DecayModel m) const {
  for (const auto& f : fits)
    if (f.model == m) return f;
  throw Error(ErrorKind::DegenerateFit, "scan has no fit for this model");
}

nlohmann::json LambdaScan::to_json() const {
  auto rows_json = nlohmann::json::array();
  for (const auto& r : rows)
    rows_json.push_back({{"R", r.R},
                         {"log_lambda", log_json(r.lambda.log_mag())},
                         {"alpha", r.alpha},
                         {"log_lhs_growth", r.lhs_growth.log_mag()},
                         {"log_growth_asymptotic", r.log_growth_asymptotic},
                         {"pass_absorption", r.pass_absorption},
                         {"pass_lower_bound", r.pass_lower_bound},
                         {"log_chain_lhs", r.log_chain_lhs},
                         {"log_lambda_term", log_json(r.log_lambda_term)},
                         {"log_A_term", log_json(r.log_A_term)},
                         {"chain_holds", r.chain_holds},
                         {"boundary_mass", r.boundary_mass}});
  auto fits_json = nlohmann::json::object();
  for (const auto& f : fits)
    fits_json[std::string(num::to_string(f.model))] = {
        {"c", f.exponent_constant}, {"intercept", f.intercept}, {"rms_log_residual", f.residual}};
  return {{"rows", rows_json},
          {"vacuous", vacuous},
          {"fits", fits_json},
          {"best_model", vacuous ? "none" : std::string(num::to_string(best_model))},
          {"c_fit", c_fit}};
}

std::string LambdaScan::to_tsv() const {
  std::string out = "R\tlog_lambda\talpha\tlog_lhs_growth\tpass_absorption\tboundary_mass\n";
  for (const auto& r : rows)
    out += fmt(r.R) + '\t' + fmt(r.lambda.log_mag()) + '\t' + fmt(r.alpha) + '\t' + fmt(r.lhs_growth.log_mag()) + '\t' +
           (r.pass_absorption ? "1" : "0") + '\t' + fmt(r.boundary_mass) + '\n';
  return out;
}

LambdaScan lambda_scan(const evolution::Trajectory& traj, const ExperimentConfig& cfg) {
  const auto field = traj.space_time();
  const double boundary = lattice::boundary_mass_fraction(field);
  LambdaScan scan;
  scan.rows = parallel_map<ScanRow>(cfg.R_list.size(), [&](std::size_t i) {
    auto row = make_row(cfg.R_list[i], lattice::ring_mass(field, cfg.R_list[i]), cfg);
    row.boundary_mass = boundary;
    return row;
  });
  finish(scan);
  return scan;
}

LambdaScan lambda_scan(const lattice::LatticeField& u, const ExperimentConfig& cfg) {
  const double boundary = lattice::boundary_mass_fraction(u);
  LambdaScan scan;
  scan.rows = parallel_map<ScanRow>(cfg.R_list.size(), [&](std::size_t i) {
    auto row = make_row(cfg.R_list[i], lattice::ring_mass(u, cfg.R_list[i]), cfg);
    row.boundary_mass = boundary;
    return row;
  });
  finish(scan);
  return scan;
}

evolution::Trajectory reference_trajectory(const ExperimentConfig& cfg, const lattice::LatticeField& u0) {
  evolution::EvolutionConfig ec;
  ec.dt = cfg.dt;
  ec.T = cfg.T;
  ec.window = u0.window();
  ec.potential = cfg.L > 0.0 ? evolution::random_real_potential(ec.window, cfg.L, cfg.seed) : lattice::Potential(ec.window);
  return evolution::normalize_observation(evolution::evolve(u0, ec), cfg.normalization);
}

}  // namespace carleman::experiments
