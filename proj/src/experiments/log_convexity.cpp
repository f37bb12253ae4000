#include "carleman/experiments/log_convexity.hpp"

#include <algorithm>
#include <cmath>

#include "carleman/error.hpp"
#include "carleman/numeric/log_scalar.hpp"
#include "carleman/parallel.hpp"

namespace carleman::experiments {

namespace {

// log sum_j e^{2 beta.j} |u_j|^2
double log_weighted(const lattice::LatticeField& u, const BetaVector& beta) {
  const auto& w = u.window();
  std::vector<double> terms;
  terms.reserve(w.site_count());
  w.for_each_site([&](std::size_t i, const lattice::Site& j) {
    const double a = std::norm(u[i]);
    if (a == 0.0) return;
    double dot = 0.0;
    for (int k = 0; k < w.dimension(); ++k) dot += beta[k] * j[k];
    terms.push_back(2.0 * dot + std::log(a));
  });
  return num::log_sum_exp(terms).log_mag();
}

double inf_norm(const BetaVector& b) {
  double m = 0.0;
  for (double x : b) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<BetaVector> axis_betas(int d, double beta_max, double step) {
  std::vector<BetaVector> out;
  const int n = static_cast<int>(std::llround(beta_max / step));
  for (int i = -n; i <= n; ++i) {
    BetaVector b(d, 0.0);
    b[0] = i * step;
    out.push_back(b);
  }
  return out;
}

LogConvexityResult log_convexity_check(const evolution::Trajectory& traj, const std::vector<BetaVector>& betas,
                                       double L, double beta_max, double tolerance) {
  if (traj.snapshots.size() < 3) throw Error(ErrorKind::InvalidArgument, "log-convexity needs interior snapshots");
  for (const auto& b : betas)
    if (static_cast<int>(b.size()) != traj.window.dimension())
      throw Error(ErrorKind::InvalidArgument, "beta dimension differs from the lattice");
  LogConvexityResult res;
  res.betas = betas;
  const std::size_t last = traj.snapshots.size() - 1;
  for (std::size_t n = 1; n < last; ++n) res.times.push_back(traj.times[n]);

  res.log_rho = parallel_map<std::vector<double>>(betas.size(), [&](std::size_t b) {
    const double ends[2] = {log_weighted(traj.snapshots.front(), betas[b]), log_weighted(traj.snapshots.back(), betas[b])};
    const double denom = num::log_sum_exp(ends).log_mag();
    std::vector<double> row;
    for (std::size_t n = 1; n < last; ++n) row.push_back(log_weighted(traj.snapshots[n], betas[b]) - denom);
    return row;
  });

  res.max_log_rho = -INFINITY;
  double max_half = -INFINITY, max_full = -INFINITY;
  for (std::size_t b = 0; b < betas.size(); ++b) {
    const double m = *std::max_element(res.log_rho[b].begin(), res.log_rho[b].end());
    res.max_log_rho = std::max(res.max_log_rho, m);
    const double size = inf_norm(betas[b]);
    if (size <= beta_max / 2 + 1e-12) max_half = std::max(max_half, m);
    if (size <= beta_max + 1e-12) max_full = std::max(max_full, m);
  }

  auto& rep = res.report;
  rep.check = "log_convexity";
  rep.params = {{"L", L}, {"beta_max", beta_max}, {"betas", betas.size()}, {"times", res.times}};
  if (L == 0.0) {
    rep.defect = std::expm1(res.max_log_rho);  // rho - 1
    rep.tolerance = tolerance;
    rep.pass = rep.defect <= tolerance;
  } else {
    res.C_half = max_half / L;
    res.C_full = max_full / L;
    res.relative_change = std::abs(res.C_full - res.C_half) / std::abs(res.C_half);
    rep.defect = res.relative_change;
    rep.tolerance = 0.2;
    rep.pass = std::isfinite(res.C_full) && res.relative_change < 0.2;
  }
  rep.details = {{"max_log_rho", res.max_log_rho}, {"C_half", res.C_half}, {"C_full", res.C_full},
                 {"relative_change", res.relative_change}};
  return res;
}

}  // namespace carleman::experiments
