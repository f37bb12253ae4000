#include "carleman/experiments/uniqueness.hpp"

#include <cmath>

#include "carleman/error.hpp"
#include "carleman/evolution/data.hpp"

namespace carleman::experiments {

namespace {

struct WeightedSum {
  double log_total = -INFINITY;
  double log_shell = -INFINITY;  // part carried by the outer two layers of the window

  // A sum that is still growing at the window edge does not converge on Z^d.
  bool converged() const { return log_shell - log_total < std::log(1e-12); }
};

// sum_j e^{2 k |j| log(|j|+1)} |u_j|^2, as logs
WeightedSum weighted_sum(const lattice::LatticeField& u, double k) {
  const auto& w = u.window();
  std::vector<double> terms, shell;
  w.for_each_site([&](std::size_t i, const lattice::Site& j) {
    const double a = std::norm(u[i]);
    if (a == 0.0) return;
    const double r = lattice::euclidean_norm(j, w.dimension());
    const double t = 2.0 * k * r * std::log1p(r) + std::log(a);
    terms.push_back(t);
    if (lattice::max_norm(j, w.dimension()) > w.half_width() - 2) shell.push_back(t);
  });
  return {num::log_sum_exp(terms).log_mag(), num::log_sum_exp(shell).log_mag()};
}

}  // namespace

UniquenessResult weighted_uniqueness_threshold(const ExperimentConfig& cfg) {
  cfg.validate();
  UniquenessResult res;
  res.mu = cfg.mu;
  res.hypothesis_met = cfg.mu > 0.0;
  auto& rep = res.report;
  rep.check = "weighted_uniqueness_threshold";
  rep.params = {{"mu", cfg.mu}, {"d", cfg.d}, {"L", cfg.L}, {"R_list", cfg.R_list}};
  if (!res.hypothesis_met) {
    rep.details = {{"hypothesis_met", false}, {"contradiction", false}};
    return res;
  }

  const auto u0 = evolution::make_decaying_datum(cfg.window(), evolution::DatumProfile::bessel_like(cfg.mu));
  const auto traj = reference_trajectory(cfg, u0);
  res.scan = lambda_scan(traj, cfg);
  if (res.scan.vacuous) throw Error(ErrorKind::DegenerateFit, "lambda scan is vacuous");
  res.c_low = res.scan.c_fit;

  // Weighted-sum bound: sup_t S_{mu c0}(t) <= e^{C L} (S_mu(0) + S_mu(1)).
  // The right side must converge for the hypothesis to hold; c0 is the
  // largest grid value whose left side converges (and obeys the bound when
  // the hypothesis holds), so lambda(R) <= sqrt(sup S) e^{-mu c0 (R-2) log(R-1)}.
  const double C = cfg.tolerance("weighted_sum_C", 1.0);
  const auto s0 = weighted_sum(traj.initial(), cfg.mu), s1 = weighted_sum(traj.final(), cfg.mu);
  res.hypothesis_met = s0.converged() && s1.converged();
  const double ends[2] = {s0.log_total, s1.log_total};
  const double log_rhs = num::log_sum_exp(ends).log_mag() + C * cfg.L;
  for (int step = 40; step >= 1; --step) {
    const double c0 = step / 40.0;
    bool ok = true;
    for (const auto& s : traj.snapshots) {
      const auto w = weighted_sum(s, cfg.mu * c0);
      if (!w.converged() || (res.hypothesis_met && w.log_total > log_rhs)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      res.c0 = c0;
      break;
    }
  }
  res.mu_c0 = cfg.mu * res.c0;
  res.critical_ratio = res.c0 > 0.0 ? res.c_low / res.c0 : INFINITY;
  res.contradiction = res.hypothesis_met && res.mu_c0 > res.c_low;

  rep.defect = res.mu_c0 - res.c_low;
  rep.tolerance = 0.0;
  rep.pass = !res.contradiction && std::isfinite(res.critical_ratio);
  rep.details = {{"hypothesis_met", res.hypothesis_met}, {"c_low", res.c_low},          {"c0", res.c0},
                 {"mu_c0", res.mu_c0},      {"critical_ratio", res.critical_ratio},
                 {"contradiction", res.contradiction}, {"scan", res.scan.to_json()}};
  return res;
}

double frozen_decay_constant(double mu, int d, const std::vector<double>& R_list) {
  ExperimentConfig cfg;
  cfg.d = d;
  cfg.R_list = R_list;
  cfg.validate();
  lattice::LatticeField u(cfg.window());
  cfg.window().for_each_site([&](std::size_t i, const lattice::Site& j) {
    u[i] = evolution::datum_amplitude(j, d, evolution::DatumProfile::bessel_like(mu));
  });
  const auto scan = lambda_scan(u, cfg);
  if (scan.vacuous) throw Error(ErrorKind::DegenerateFit, "frozen field scan is vacuous");
  return scan.c_fit;
}

}  // namespace carleman::experiments
