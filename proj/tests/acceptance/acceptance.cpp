// Acceptance runner: one PASS/FAIL line per named check.
//   carleman_acceptance [name...]   (no names runs all)
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "carleman/cli.hpp"
#include "carleman/counterexample/construction.hpp"
#include "carleman/error.hpp"
#include "carleman/estimate/checks.hpp"
#include "carleman/estimate/inequalities.hpp"
#include "carleman/evolution/data.hpp"
#include "carleman/evolution/evolve.hpp"
#include "carleman/experiments/kbessel.hpp"
#include "carleman/experiments/lambda_scan.hpp"
#include "carleman/experiments/log_convexity.hpp"
#include "carleman/experiments/norm_star.hpp"
#include "carleman/parallel.hpp"

using namespace carleman;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

void note(Verdict& v, bool ok, const std::string& what) {
  v.pass = v.pass && ok;
  if (!v.detail.empty()) v.detail += "; ";
  v.detail += what + (ok ? "" : " [fail]");
}

estimate::CheckConfig operator_config(int d, double R, int trials, std::uint64_t seed, estimate::TimeProfile phi) {
  return estimate::CheckConfig{.spec = estimate::WeightSpec::from_rule(2.0, R, d, phi), .trials = trials, .seed = seed};
}

template <class Check>
Verdict operator_grid(Check check, double tol) {
  Verdict v;
  for (int d : {1, 2})
    for (double R : {5.0, 10.0}) {
      const auto rep = check(operator_config(d, R, 50, 1000 + 10 * d + static_cast<int>(R),
                                             estimate::TimeProfile::paper_phi()));
      note(v, rep.pass && rep.defect <= tol,
           "d=" + std::to_string(d) + " R=" + std::to_string(static_cast<int>(R)) + " defect=" + sci(rep.defect));
    }
  return v;
}

Verdict conjugation_identity() { return operator_grid(estimate::conjugation_check, 1e-9); }
Verdict symmetry() { return operator_grid(estimate::symmetry_check, 1e-9); }

Verdict commutator_identity() {
  Verdict v = operator_grid(estimate::commutator_check, 1e-8);
  return v;
}

Verdict stationary_positivity() {
  Verdict v;
  for (int d : {1, 2}) {
    const auto rep = estimate::positivity_check(operator_config(d, 10.0, 100, 77 + d, estimate::TimeProfile::constant(3.0)));
    note(v, rep.pass, "d=" + std::to_string(d) + " worst=" + sci(rep.defect));
  }
  return v;
}

Verdict carleman_inequality() {
  auto cal = operator_config(1, 10.0, 500, 5, estimate::TimeProfile::paper_phi());
  const auto batch = estimate::carleman_batch(cal);
  auto hold = cal;
  hold.seed = 50005;
  const auto rep = estimate::carleman_holdout(hold, 2.0 * batch.max_ratio);
  Verdict v;
  note(v, rep.pass,
       "calibration max=" + sci(batch.max_ratio) + " held-out violations=" + std::to_string(int(rep.defect)) +
           " held-out max=" + sci(rep.details["max_ratio"].get<double>()));
  return v;
}

Verdict hiding() {
  std::vector<estimate::HidingResult> res;
  const std::vector<double> Rs{10, 20, 40, 80};
  const auto rep = estimate::hiding_scan(Rs, estimate::TimeProfile::paper_phi(), 20.0, &res);
  Verdict v;
  std::string cs;
  for (const auto& r : res) cs += " " + sci(r.c_min);
  note(v, rep.pass, "c_min by R:" + cs);
  return v;
}

Verdict unitarity_and_fundamental_solution() {
  Verdict v;
  evolution::EvolutionConfig ec;
  ec.window = lattice::LatticeWindow(1, 40);
  ec.potential = lattice::Potential(ec.window);
  const auto u0 = evolution::make_decaying_datum(ec.window, evolution::DatumProfile::delta());
  const auto traj = evolution::evolve(u0, ec);
  double drift = 0.0;
  for (double n : traj.norm2) drift = std::max(drift, std::abs(n - 1.0));
  note(v, drift <= 1e-10, "norm drift=" + sci(drift));

  // The phase convention comes from the Taylor series at small t.
  const double t0 = 0.01;
  const auto small = evolution::taylor_propagate(u0, t0);
  double phase = 0.0;
  for (int j = -5; j <= 5; ++j)
    phase = std::max(phase, std::abs(small.at({j, 0, 0}) - evolution::fundamental_solution(j, t0)));
  note(v, phase <= 1e-14, "small-t phase check=" + sci(phase));

  double err = 0.0;
  for (int j = -20; j <= 20; ++j)
    err = std::max(err, std::abs(traj.final().at({j, 0, 0}) - evolution::fundamental_solution(j, 1.0)));
  note(v, err <= 1e-6, "dt=1e-3 max Bessel error=" + sci(err));
  return v;
}

experiments::ExperimentConfig scan_config() {
  experiments::ExperimentConfig cfg;
  cfg.M = 40;
  for (int R = 8; R <= 28; ++R) cfg.R_list.push_back(R);
  return cfg;
}

Verdict decay_model_selection() {
  const auto cfg = scan_config();
  const auto traj = experiments::reference_trajectory(
      cfg, evolution::make_decaying_datum(cfg.window(), evolution::DatumProfile::delta()));
  const auto scan = experiments::lambda_scan(traj, cfg);
  const double a = scan.fit(num::DecayModel::RLogR).residual;
  const double b = scan.fit(num::DecayModel::RSquared).residual;
  Verdict v;
  note(v, !scan.vacuous && a < b, "rms R log R=" + sci(a) + " rms R^2=" + sci(b));
  return v;
}

Verdict log_convexity() {
  Verdict v;
  auto cfg = scan_config();
  cfg.R_list = {8};
  const auto betas = experiments::axis_betas(1, 2.0, 0.125);
  const auto delta = evolution::make_decaying_datum(cfg.window(), evolution::DatumProfile::delta());
  const auto free = experiments::log_convexity_check(experiments::reference_trajectory(cfg, delta), betas, 0.0, 2.0);
  note(v, free.report.pass && free.times.size() == 9,
       "free max log rho=" + sci(free.max_log_rho) + " interior times=" + std::to_string(free.times.size()));
  cfg.L = 1.0;
  const auto with_v = experiments::log_convexity_check(experiments::reference_trajectory(cfg, delta), betas, 1.0, 2.0);
  note(v, with_v.report.pass,
       "L=1 C(1)=" + sci(with_v.C_half) + " C(2)=" + sci(with_v.C_full) + " change=" + sci(with_v.relative_change));
  return v;
}

Verdict norm_star() {
  Verdict v;
  const auto two = experiments::norm_star_equivalence(2, 10000);
  note(v, std::isfinite(two.sup_ratio) && two.inf_ratio > 0,
       "d=2 sup=" + sci(two.sup_ratio) + " inf=" + sci(two.inf_ratio));
  const auto one = experiments::norm_star_equivalence(1, 10000);
  note(v, one.sup_ratio == 1.0 && one.inf_ratio == 1.0, "d=1 sup=" + sci(one.sup_ratio) + " inf=" + sci(one.inf_ratio));
  return v;
}

Verdict k_bessel() {
  std::vector<int> growth;
  for (int j = 20; j <= 200; j += 20) growth.push_back(j);
  const auto res = experiments::k_bessel_weight_check(1.0, {5, 10, 20}, growth, 1e-8);
  Verdict v;
  note(v, res.report.pass,
       "max defect=" + sci(res.report.defect) + " growth coefficient=" + sci(res.growth_coefficient));
  return v;
}

Verdict absorption_threshold() {
  const std::vector<double> Rs{1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8};
  Verdict v;
  const auto sq = estimate::phi_rate_scan(estimate::PhiGrowth::SqrtLog, 1.0, 1.0, 1, Rs);
  std::string passing;
  for (const auto& r : sq.rows)
    if (r.R >= 1e4 && r.pass) passing += " " + sci(r.R);
  note(v, passing.empty(), "sqrt(log R) passing rows at R>=1e4:" + (passing.empty() ? std::string(" none") : passing));
  const auto lg = estimate::phi_rate_scan(estimate::PhiGrowth::Log, 1.0, 1.0, 1, Rs);
  note(v, std::isfinite(lg.R0), "log R passes from R0=" + sci(lg.R0));
  return v;
}

Verdict counterexample_checks() {
  using namespace counterexample;
  Verdict v;
  for (int R : {10, 20, 40}) {
    const auto rep = verify_counterexample(build_counterexample({.R = R}));
    note(v, rep.all_pass(), "repaired R=" + std::to_string(R));
  }
  const auto scan = potential_bound_scan({10, 20, 40});
  note(v, scan.identical, "sup V=" + rational_string(scan.sup.front()) + " across R");
  for (int R : {10, 20, 40}) {
    const auto rep = verify_counterexample(build_counterexample({.R = R, .mode = ValueMode::LiteralPaper}));
    std::set<std::pair<int, int>> sites;
    for (const auto& f : rep.harmonic_failures) sites.insert({f.site[0], f.site[1]});
    for (const auto& f : rep.equation_failures) sites.insert({f.site[0], f.site[1]});
    const std::set<std::pair<int, int>> expected{{0, R - 2}, {0, R + 2}, {-2, R}, {2, R}};
    note(v, sites == expected || sites.empty(),
         "literal R=" + std::to_string(R) + " residual sites=" + std::to_string(sites.size()));
  }
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "carleman");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

fs::path only_run(const fs::path& root) {
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) return e.path();
  throw Error(ErrorKind::Io, "no run under " + root.string());
}

Verdict determinism() {
  const fs::path root = fs::temp_directory_path() / ("carleman_determinism_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const std::vector<std::vector<std::string>> scans{
      {"lambda-scan", "--L", "1", "--seed", "4"},
      {"logconvexity", "--L", "1", "--seed", "2"},
      {"carleman-check", "--trials", "40", "--seed", "3"},
      {"commutator-check", "--trials", "8", "--seed", "6"},
      {"hiding-scan"},
      {"threshold-scan"},
      {"potential-scan"},
  };
  Verdict v;
  for (const auto& scan : scans) {
    auto first = scan;
    first.insert(first.end(), {"--out", (root / scan[0] / "seed").string()});
    set_worker_count(1);
    cli(first);
    const auto manifest = only_run(root / scan[0] / "seed") / "manifest.json";
    std::vector<fs::path> runs;
    for (int w : {1, 4, 8}) {
      set_worker_count(w);
      const auto out = root / scan[0] / ("w" + std::to_string(w));
      cli({scan[0], "--config", manifest.string(), "--out", out.string()});
      runs.push_back(only_run(out));
    }
    bool same = true;
    int files = 0;
    for (const auto& e : fs::directory_iterator(manifest.parent_path())) {
      const auto name = e.path().filename();
      if (name == "manifest.json") continue;
      ++files;
      const auto ref = slurp(e.path());
      for (const auto& r : runs) same = same && fs::exists(r / name) && slurp(r / name) == ref;
    }
    note(v, same && files > 0, scan[0] + " files=" + std::to_string(files));
  }
  set_worker_count(0);
  fs::remove_all(root);
  return v;
}

struct Criterion {
  const char* name;
  Verdict (*run)();
};

constexpr Criterion kCriteria[] = {
    {"conjugation_identity", conjugation_identity},
    {"symmetry", symmetry},
    {"commutator_identity", commutator_identity},
    {"stationary_positivity", stationary_positivity},
    {"carleman_inequality", carleman_inequality},
    {"hiding_inequalities", hiding},
    {"unitarity_and_fundamental_solution", unitarity_and_fundamental_solution},
    {"decay_model_selection", decay_model_selection},
    {"log_convexity", log_convexity},
    {"norm_star_equivalence", norm_star},
    {"k_bessel_identity", k_bessel},
    {"absorption_threshold", absorption_threshold},
    {"counterexample", counterexample_checks},
    {"determinism", determinism},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> wanted(argv + 1, argv + argc);
  for (const auto& w : wanted)
    if (std::none_of(std::begin(kCriteria), std::end(kCriteria), [&](const Criterion& c) { return w == c.name; })) {
      std::cerr << "unknown check " << w << "\n";
      return 2;
    }
  bool all = true;
  for (const auto& c : kCriteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.name) == wanted.end()) continue;
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (v.pass ? "PASS " : "FAIL ") << c.name << ": " << v.detail << std::endl;
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
