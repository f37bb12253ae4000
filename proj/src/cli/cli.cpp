#include "carleman/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

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
#include "carleman/experiments/uniqueness.hpp"
#include "carleman/io/hash.hpp"
#include "carleman/report.hpp"

namespace carleman::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  throw Error(ErrorKind::Config, "config key '" + key + "' " + what);
}

double number_of(const json& v, const std::string& key) {
  if (!v.is_number()) config_error(key, "must be a number");
  return v.get<double>();
}

long long integer_of(const json& v, const std::string& key) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) config_error(key, "must be an integer");
  return v.get<long long>();
}

std::string string_of(const json& v, const std::string& key) {
  if (!v.is_string()) config_error(key, "must be a string");
  return v.get<std::string>();
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::string utc_stamp(std::chrono::system_clock::time_point t, const char* format) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[64];
  std::strftime(buf, sizeof buf, format, &tm);
  return buf;
}

std::vector<double> range(double from, double to, double step) {
  std::vector<double> out;
  for (double x = from; x <= to + 1e-9; x += step) out.push_back(x);
  return out;
}

std::vector<int> as_ints(const std::vector<double>& xs, const char* key) {
  std::vector<int> out;
  for (double x : xs) {
    if (x != std::floor(x)) config_error(key, "must hold integers here");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

}  // namespace

json RunConfig::to_json() const {
  json tol = json::object();
  for (const auto& [k, v] : tolerance) tol[k] = v;
  return {{"d", d},
          {"M", M},
          {"R", R},
          {"R_list", R_list},
          {"alpha", alpha ? json(*alpha) : json(nullptr)},
          {"c", c},
          {"L", L},
          {"A", A},
          {"mu", mu},
          {"beta_max", beta_max},
          {"trials", trials},
          {"seed", seed},
          {"dt", dt},
          {"T", T},
          {"mode", mode},
          {"normalization", normalization},
          {"tolerance", tol}};
}

void RunConfig::merge(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Config, "config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "d") d = static_cast<int>(integer_of(v, key));
    else if (key == "M") M = static_cast<int>(integer_of(v, key));
    else if (key == "R") R = number_of(v, key);
    else if (key == "R_list") {
      if (!v.is_array()) config_error(key, "must be an array of numbers");
      std::vector<double> xs;
      for (const auto& x : v) xs.push_back(number_of(x, key));
      R_list = std::move(xs);
    } else if (key == "alpha") {
      if (v.is_null()) alpha.reset();
      else alpha = number_of(v, key);
    } else if (key == "c") c = number_of(v, key);
    else if (key == "L") L = number_of(v, key);
    else if (key == "A") A = number_of(v, key);
    else if (key == "mu") mu = number_of(v, key);
    else if (key == "beta_max") beta_max = number_of(v, key);
    else if (key == "trials") trials = static_cast<int>(integer_of(v, key));
    else if (key == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        config_error(key, "must be a nonnegative integer");
      seed = v.get<std::uint64_t>();
    } else if (key == "dt") dt = number_of(v, key);
    else if (key == "T") T = number_of(v, key);
    else if (key == "mode") mode = string_of(v, key);
    else if (key == "normalization") normalization = string_of(v, key);
    else if (key == "tolerance") {
      if (!v.is_object()) config_error(key, "must be an object of numbers");
      for (const auto& [name, x] : v.items()) tolerance[name] = number_of(x, key + "." + name);
    } else {
      config_error(key, "is not a known key");
    }
  }
}

experiments::ExperimentConfig RunConfig::experiment() const {
  experiments::ExperimentConfig e;
  e.d = d;
  e.M = M;
  e.A = A;
  e.L = L;
  e.R_list = R_list;
  e.c_rule = c;
  e.mu = mu;
  e.seed = seed;
  e.dt = dt;
  e.T = T;
  e.beta_max = beta_max;
  e.normalization = evolution::parse_normalization(normalization);
  e.tolerances = tolerance;
  return e;
}

RunConfig defaults_for(const std::string& sub) {
  RunConfig c;
  if (sub == "evolve") {
    c.M = 40;
    c.mode = "delta";
  } else if (sub == "carleman-check") {
    c.trials = 500;
  } else if (sub == "commutator-check") {
    c.mode = "evolution";
  } else if (sub == "hiding-scan") {
    c.R_list = {10, 20, 40, 80};
  } else if (sub == "lambda-scan") {
    c.M = 40;
    c.R_list = range(8, 28, 1);
    c.mode = "evolution";
  } else if (sub == "logconvexity") {
    c.M = 40;
  } else if (sub == "normstar") {
    c.d = 2;
    c.M = 10000;
  } else if (sub == "kbessel") {
    c.mu = 1.0;
    c.R_list = {5, 10, 20};
  } else if (sub == "threshold-scan") {
    c.c = 1.0;
    c.L = 1.0;
    c.R_list = {1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8};
    c.mode = "both";
  } else if (sub == "counterexample" || sub == "verify-counterexample") {
    c.d = 2;
    c.R = 20;
    c.mode = "repaired";
  } else if (sub == "potential-scan") {
    c.d = 2;
    c.R_list = {10, 20, 40};
  }
  return c;
}

RunConfig load_config(const fs::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot read config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, "config file " + path.string() + " is not JSON: " + e.what());
  }
  if (j.is_object() && j.contains("subcommand") && j.contains("config")) j = j["config"];
  base.merge(j);
  return base;
}

json RunManifest::to_json() const {
  return {{"subcommand", subcommand},
          {"config", config.to_json()},
          {"seed", config.seed},
          {"version", version},
          {"started", started},
          {"finished", finished},
          {"outputs", outputs},
          {"input_hash", input_hash},
          {"checks", checks}};
}

namespace {

struct TsvDoc {
  const char* subcommand;
  const char* columns;
};

// Columns of the TSV each subcommand writes; shown in --help.
constexpr TsvDoc kTsvColumns[] = {
    {"evolve", "t norm2"},
    {"carleman-check", "trial calibration_ratio"},
    {"hiding-scan", "R s c_min_A c_min_B"},
    {"lambda-scan", "R log_lambda alpha log_lhs_growth pass_absorption boundary_mass"},
    {"logconvexity", "beta_1 t log_rho"},
    {"kbessel", "j rel_defect"},
    {"threshold-scan", "growth R phi alpha log_lhs log_rhs pass"},
    {"potential-scan", "R sup_V sup_V_double"},
};

std::string tsv_columns(const std::string& sub) {
  for (const auto& doc : kTsvColumns)
    if (sub == doc.subcommand) return doc.columns;
  return "";
}

std::string tsv_header(const std::string& sub) {
  std::string h = tsv_columns(sub);
  std::replace(h.begin(), h.end(), ' ', '\t');
  return h + "\n";
}

// Collects files under the run directory, in write order.
class RunOutput {
 public:
  RunOutput(fs::path dir) : dir_(std::move(dir)) {}
  const fs::path& dir() const { return dir_; }
  void write(const std::string& name, const std::string& content) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, "cannot write " + (dir_ / name).string());
    f << content;
    add(name);
  }
  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
  void add(const std::string& name) {
    if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
  }
  void add_paths(const std::vector<fs::path>& paths) {
    for (const auto& p : paths) add(fs::relative(p, dir_).generic_string());
  }
  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

struct Outcome {
  std::vector<CheckReport> checks;
  json result = json::object();
};

CheckReport make_check(const std::string& name, double defect, double tolerance, bool pass,
                       json details = json::object()) {
  CheckReport r;
  r.check = name;
  r.defect = defect;
  r.tolerance = tolerance;
  r.pass = pass;
  r.details = std::move(details);
  return r;
}

estimate::WeightSpec weight_spec(const RunConfig& c, estimate::TimeProfile phi) {
  if (c.alpha) return estimate::WeightSpec{*c.alpha, c.R, phi, c.d};
  return estimate::WeightSpec::from_rule(c.c, c.R, c.d, phi);
}

estimate::CheckConfig check_config(const RunConfig& c, estimate::TimeProfile phi) {
  estimate::CheckConfig cc{.spec = weight_spec(c, phi), .M = c.M, .trials = c.trials, .seed = c.seed};
  return cc;
}

std::optional<double> tolerance_of(const RunConfig& c, const std::string& name) {
  const auto it = c.tolerance.find(name);
  if (it == c.tolerance.end()) return std::nullopt;
  return it->second;
}

Outcome do_evolve(const RunConfig& c, RunOutput& out) {
  const lattice::LatticeWindow w(c.d, c.M);
  evolution::EvolutionConfig ec;
  ec.dt = c.dt;
  ec.T = c.T;
  ec.window = w;
  ec.potential = c.L > 0 ? evolution::random_real_potential(w, c.L, c.seed) : lattice::Potential(w);
  const auto profile = evolution::parse_datum(c.mode, c.mu);
  const auto u0 = evolution::make_decaying_datum(w, profile);
  const auto traj = evolution::evolve(u0, ec);

  Outcome o;
  double drift = 0.0;
  for (double n2 : traj.norm2) drift = std::max(drift, std::abs(n2 - traj.norm2.front()) / traj.norm2.front());
  const double norm_tol = tolerance_of(c, "unitarity").value_or(1e-10);
  o.checks.push_back(make_check("unitarity", drift, norm_tol, drift <= norm_tol,
                                {{"max_step_drift", traj.max_step_drift}}));
  if (c.d == 1 && c.L == 0 && profile.kind == evolution::DatumKind::Delta) {
    double err = 0.0;
    const int jmax = std::min(20, c.M);
    for (int j = -jmax; j <= jmax; ++j)
      err = std::max(err, std::abs(traj.final().at({j, 0, 0}) - evolution::fundamental_solution(j, c.T)));
    const double tol = tolerance_of(c, "fundamental_solution").value_or(1e-6);
    o.checks.push_back(make_check("fundamental_solution", err, tol, err <= tol, {{"j_max", jmax}}));
  }
  out.add_paths({evolution::write_trajectory(traj, out.dir(), "trajectory")});
  for (std::size_t n = 0; n < traj.times.size(); ++n) {
    char name[64];
    std::snprintf(name, sizeof name, "trajectory_t%05zu.field", n);
    out.add(name);
    out.add(std::string(name) + ".json");
  }
  std::string tsv = tsv_header("evolve");
  for (std::size_t n = 0; n < traj.times.size(); ++n) tsv += fmt(traj.times[n]) + "\t" + fmt(traj.norm2[n]) + "\n";
  out.write("evolve.tsv", tsv);
  o.result = {{"scheme", evolution::kSchemeTag},
              {"potential_hash", traj.potential_hash},
              {"max_step_drift", traj.max_step_drift},
              {"observation_integral", nullptr}};
  // The observation window lives in [0, 1].
  if (c.T == 1.0)
    o.result["observation_integral"] =
        evolution::observation_integral(traj, evolution::parse_normalization(c.normalization));
  return o;
}

Outcome do_carleman_check(const RunConfig& c, RunOutput& out) {
  auto cal = check_config(c, estimate::TimeProfile::paper_phi());
  const auto batch = estimate::carleman_batch(cal);
  const double constant = 2.0 * batch.max_ratio;
  auto hold = cal;
  hold.seed = c.seed ^ 0x9e3779b97f4a7c15ULL;
  const auto rep = estimate::carleman_holdout(hold, constant);
  std::string tsv = tsv_header("carleman-check");
  for (std::size_t i = 0; i < batch.ratios.size(); ++i) tsv += std::to_string(i) + "\t" + fmt(batch.ratios[i]) + "\n";
  out.write("carleman-check.tsv", tsv);
  Outcome o;
  o.checks.push_back(rep);
  o.result = {{"calibration_max_ratio", batch.max_ratio},
              {"calibration_worst_trial", batch.worst_trial},
              {"constant", constant}};
  return o;
}

Outcome do_commutator_check(const RunConfig& c, RunOutput&) {
  Outcome o;
  if (c.mode == "stationary") {
    auto cc = check_config(c, estimate::TimeProfile::constant(3.0));
    cc.tolerance = tolerance_of(c, "positivity");
    o.checks.push_back(estimate::positivity_check(cc));
  } else if (c.mode == "evolution") {
    auto cc = check_config(c, estimate::TimeProfile::paper_phi());
    cc.tolerance = tolerance_of(c, "conjugation");
    o.checks.push_back(estimate::conjugation_check(cc));
    cc.tolerance = tolerance_of(c, "symmetry");
    o.checks.push_back(estimate::symmetry_check(cc));
    cc.tolerance = tolerance_of(c, "commutator");
    o.checks.push_back(estimate::commutator_check(cc));
  } else {
    throw Error(ErrorKind::Config, "config key 'mode' must be evolution or stationary for commutator-check");
  }
  double worst = 0.0;
  for (const auto& r : o.checks) worst = std::max(worst, r.defect);
  o.result = {{"max_defect", worst}};
  return o;
}

Outcome do_hiding_scan(const RunConfig& c, RunOutput& out) {
  std::vector<estimate::HidingResult> results;
  const double from = tolerance_of(c, "monotone_from").value_or(20.0);
  Outcome o;
  o.checks.push_back(estimate::hiding_scan(c.R_list, estimate::TimeProfile::paper_phi(), from, &results));
  std::string tsv = tsv_header("hiding-scan");
  for (const auto& r : results)
    for (const auto& row : r.rows)
      tsv += fmt(row.R) + "\t" + fmt(row.s) + "\t" + fmt(row.c_min_A) + "\t" + fmt(row.c_min_B) + "\n";
  out.write("hiding-scan.tsv", tsv);
  return o;
}

Outcome do_lambda_scan(const RunConfig& c, RunOutput& out) {
  Outcome o;
  auto cfg = c.experiment();
  if (c.mode == "uniqueness") {
    if (c.mu <= 0) throw Error(ErrorKind::Config, "config key 'mu' must be positive for uniqueness mode");
    const auto res = experiments::weighted_uniqueness_threshold(cfg);
    o.checks.push_back(res.report);
    out.write("lambda-scan.tsv", res.scan.to_tsv());
    o.result = {{"scan", res.scan.to_json()},
                {"hypothesis_met", res.hypothesis_met},
                {"c_low", res.c_low},
                {"c0", res.c0},
                {"critical_ratio", res.critical_ratio},
                {"contradiction", res.contradiction}};
    return o;
  }
  experiments::LambdaScan scan;
  if (c.mode == "evolution") {
    const auto w = cfg.window();
    const auto profile = c.mu > 0 ? evolution::DatumProfile::bessel_like(c.mu) : evolution::DatumProfile::delta();
    const auto traj = experiments::reference_trajectory(cfg, evolution::make_decaying_datum(w, profile));
    scan = experiments::lambda_scan(traj, cfg);
    if (scan.vacuous) {
      o.checks.push_back(make_check("decay_model_selection", 0.0, 0.0, true, {{"vacuous", true}}));
    } else {
      const double a = scan.fit(num::DecayModel::RLogR).residual;
      const double b = scan.fit(num::DecayModel::RSquared).residual;
      o.checks.push_back(make_check("decay_model_selection", a - b, 0.0, a < b,
                                    {{"rms_R_log_R", a}, {"rms_R_squared", b}}));
    }
  } else if (c.mode == "counterexample") {
    counterexample::CounterexampleSpec spec;
    spec.R = static_cast<int>(c.R);
    const auto ce = counterexample::build_counterexample(spec);
    const auto u = ce.field();
    cfg.d = 2;
    cfg.M = u.window().half_width();
    scan = experiments::lambda_scan(u, cfg);
    o.checks.push_back(make_check("scan_nonvacuous", 0.0, 0.0, !scan.vacuous));
  } else {
    throw Error(ErrorKind::Config, "config key 'mode' must be evolution, counterexample or uniqueness");
  }
  out.write("lambda-scan.tsv", scan.to_tsv());
  o.result = scan.to_json();
  return o;
}

Outcome do_logconvexity(const RunConfig& c, RunOutput& out) {
  auto cfg = c.experiment();
  if (cfg.R_list.empty()) cfg.R_list = {1.0};
  const auto w = cfg.window();
  const auto profile = c.mu > 0 ? evolution::DatumProfile::bessel_like(c.mu) : evolution::DatumProfile::delta();
  const auto traj = experiments::reference_trajectory(cfg, evolution::make_decaying_datum(w, profile));
  const double step = tolerance_of(c, "beta_step").value_or(0.125);
  const auto betas = experiments::axis_betas(c.d, c.beta_max, step);
  const auto res = experiments::log_convexity_check(traj, betas, c.L, c.beta_max,
                                                    tolerance_of(c, "log_convexity").value_or(1e-10));
  std::string tsv = tsv_header("logconvexity");
  for (std::size_t b = 0; b < res.betas.size(); ++b)
    for (std::size_t t = 0; t < res.times.size(); ++t)
      tsv += fmt(res.betas[b][0]) + "\t" + fmt(res.times[t]) + "\t" + fmt(res.log_rho[b][t]) + "\n";
  out.write("logconvexity.tsv", tsv);
  Outcome o;
  o.checks.push_back(res.report);
  o.result = {{"max_log_rho", res.max_log_rho},
              {"C_half", res.C_half},
              {"C_full", res.C_full},
              {"relative_change", res.relative_change}};
  return o;
}

Outcome do_normstar(const RunConfig& c, RunOutput&) {
  const auto res = experiments::norm_star_equivalence(c.d, c.M);
  Outcome o;
  o.checks.push_back(res.report);
  o.result = {{"sup_ratio", res.sup_ratio}, {"inf_ratio", res.inf_ratio}, {"c_d", res.c_d}};
  return o;
}

Outcome do_kbessel(const RunConfig& c, RunOutput& out) {
  std::vector<int> growth;
  for (int j = 20; j <= 200; j += 20) growth.push_back(j);
  const auto res = experiments::k_bessel_weight_check(c.mu, as_ints(c.R_list, "R_list"), growth,
                                                      tolerance_of(c, "k_bessel").value_or(1e-8));
  std::string tsv = tsv_header("kbessel");
  for (std::size_t i = 0; i < res.j.size(); ++i) tsv += std::to_string(res.j[i]) + "\t" + fmt(res.rel_defect[i]) + "\n";
  out.write("kbessel.tsv", tsv);
  Outcome o;
  o.checks.push_back(res.report);
  o.result = {{"constant", res.constant}, {"growth_coefficient", res.growth_coefficient}};
  return o;
}

Outcome do_threshold_scan(const RunConfig& c, RunOutput& out) {
  std::vector<estimate::PhiGrowth> growths;
  if (c.mode == "both") growths = {estimate::PhiGrowth::SqrtLog, estimate::PhiGrowth::Log};
  else growths = {estimate::parse_phi_growth(c.mode)};
  const double fail_from = tolerance_of(c, "fail_from").value_or(1e4);
  std::string tsv = tsv_header("threshold-scan");
  Outcome o;
  for (auto g : growths) {
    const auto scan = estimate::phi_rate_scan(g, c.c, c.L, c.d, c.R_list);
    json rows = json::array();
    for (const auto& r : scan.rows) {
      tsv += std::string(estimate::to_string(g)) + "\t" + fmt(r.R) + "\t" + fmt(r.phi) + "\t" + fmt(r.alpha) + "\t" +
             fmt(r.log_lhs) + "\t" + fmt(r.log_rhs) + "\t" + (r.pass ? "1" : "0") + "\n";
      rows.push_back({{"R", r.R}, {"pass", r.pass}, {"log_lhs", r.log_lhs}, {"log_rhs", r.log_rhs}});
    }
    const std::string name(estimate::to_string(g));
    if (g == estimate::PhiGrowth::SqrtLog) {
      int passing = 0;
      for (const auto& r : scan.rows)
        if (r.R >= fail_from && r.pass) ++passing;
      o.checks.push_back(make_check("threshold_" + name + "_fails", passing, 0.0, passing == 0,
                                    {{"fail_from", fail_from}, {"passing_rows_above", passing}}));
    } else {
      const bool ok = std::isfinite(scan.R0);
      o.checks.push_back(make_check("threshold_" + name + "_passes", ok ? 0.0 : 1.0, 0.0, ok,
                                    {{"R0", ok ? json(scan.R0) : json(nullptr)}}));
    }
    o.result[name] = {{"rows", rows}, {"R0", std::isfinite(scan.R0) ? json(scan.R0) : json(nullptr)},
                      {"all_fail", scan.all_fail}};
  }
  out.write("threshold-scan.tsv", tsv);
  return o;
}

counterexample::CounterexampleSpec ce_spec(const RunConfig& c, int R) {
  counterexample::CounterexampleSpec spec;
  spec.R = R;
  spec.margin = static_cast<int>(tolerance_of(c, "margin").value_or(60));
  spec.mode = counterexample::parse_value_mode(c.mode);
  spec.validate();
  return spec;
}

CheckReport verification_check(const counterexample::VerificationReport& rep) {
  const double failures = static_cast<double>(rep.vanishing_failures.size() + rep.harmonic_failures.size() +
                                              rep.equation_failures.size());
  return make_check("counterexample_R" + std::to_string(rep.R), failures, 0.0, rep.all_pass(), rep.to_json());
}

Outcome do_counterexample(const RunConfig& c, RunOutput& out) {
  const auto spec = ce_spec(c, static_cast<int>(c.R));
  const auto ce = counterexample::build_counterexample(spec);
  const auto rep = counterexample::verify_counterexample(ce);
  out.add_paths(counterexample::write_counterexample(ce, rep, out.dir(), "counterexample"));
  Outcome o;
  o.checks.push_back(verification_check(rep));
  o.result = rep.to_json();
  return o;
}

Outcome do_verify_counterexample(const RunConfig& c, RunOutput& out) {
  std::vector<int> Rs = c.R_list.empty() ? std::vector<int>{static_cast<int>(c.R)} : as_ints(c.R_list, "R_list");
  Outcome o;
  json reports = json::array();
  std::string text;
  for (int R : Rs) {
    const auto rep = counterexample::verify_counterexample(counterexample::build_counterexample(ce_spec(c, R)));
    o.checks.push_back(verification_check(rep));
    reports.push_back(rep.to_json());
    text += rep.to_text() + "\n";
  }
  out.write("verify-counterexample.txt", text);
  o.result = {{"reports", reports}};
  return o;
}

Outcome do_potential_scan(const RunConfig& c, RunOutput& out) {
  const auto scan = counterexample::potential_bound_scan(as_ints(c.R_list, "R_list"),
                                                         static_cast<int>(tolerance_of(c, "margin").value_or(60)));
  std::string tsv = tsv_header("potential-scan");
  for (std::size_t i = 0; i < scan.R.size(); ++i)
    tsv += std::to_string(scan.R[i]) + "\t" + counterexample::rational_string(scan.sup[i]) + "\t" +
           fmt(static_cast<double>(scan.sup[i])) + "\n";
  out.write("potential-scan.tsv", tsv);
  Outcome o;
  o.checks.push_back(make_check("potential_sup_identical", scan.identical ? 0.0 : 1.0, 0.0, scan.identical));
  o.result = scan.to_json();
  return o;
}

// Gathers the check lists of every manifest below --out (excluding the new run).
Outcome do_report(const fs::path& root, const fs::path& self) {
  std::vector<fs::path> manifests;
  if (fs::exists(root))
    for (const auto& e : fs::recursive_directory_iterator(root))
      if (e.is_regular_file() && e.path().filename() == "manifest.json" && e.path().parent_path() != self)
        manifests.push_back(e.path());
  std::sort(manifests.begin(), manifests.end());
  Outcome o;
  json runs = json::array();
  for (const auto& p : manifests) {
    std::ifstream in(p);
    json m;
    try {
      m = json::parse(in);
    } catch (const json::parse_error&) {
      continue;
    }
    if (!m.contains("subcommand") || m["subcommand"] == "report") continue;
    const std::string run = fs::relative(p.parent_path(), root).generic_string();
    for (const auto& ch : m.value("checks", json::array())) {
      auto r = make_check(run + ":" + ch.value("check", "?"), ch.value("defect", 0.0), ch.value("tolerance", 0.0),
                          ch.value("pass", false));
      o.checks.push_back(r);
    }
    runs.push_back({{"run", run}, {"subcommand", m["subcommand"]}, {"checks", m.value("checks", json::array())}});
  }
  o.result = {{"runs", runs}};
  return o;
}

const std::vector<std::pair<std::string, std::string>>& subcommands() {
  static const std::vector<std::pair<std::string, std::string>> subs = {
      {"evolve", "Trapezoidal evolution of a decaying datum; --mode delta|gaussian|bessel_like"},
      {"carleman-check", "Carleman constant calibration and held-out violation count"},
      {"commutator-check", "Conjugation, symmetry and commutator checks; --mode stationary runs positivity"},
      {"hiding-scan", "Minimal rule constant for the hiding inequalities over --R-list"},
      {"lambda-scan", "Ring-mass decay scan; --mode evolution|counterexample|uniqueness"},
      {"logconvexity", "Weighted-mass log-convexity ratios over axis betas"},
      {"normstar", "Norm-star equivalence scan to |j|_inf = --M"},
      {"kbessel", "K-Bessel weight identity at j in --R-list"},
      {"threshold-scan", "Absorption threshold for phi growth; --mode sqrt_log|log|both"},
      {"counterexample", "Build and verify the stationary counterexample at --R"},
      {"verify-counterexample", "Exact verification at --R or every R in --R-list"},
      {"potential-scan", "Exact sup of V across --R-list"},
      {"report", "Summarize the checks of every run under --out"},
  };
  return subs;
}

Outcome dispatch(const std::string& sub, const RunConfig& c, RunOutput& out, const fs::path& root) {
  if (sub == "evolve") return do_evolve(c, out);
  if (sub == "carleman-check") return do_carleman_check(c, out);
  if (sub == "commutator-check") return do_commutator_check(c, out);
  if (sub == "hiding-scan") return do_hiding_scan(c, out);
  if (sub == "lambda-scan") return do_lambda_scan(c, out);
  if (sub == "logconvexity") return do_logconvexity(c, out);
  if (sub == "normstar") return do_normstar(c, out);
  if (sub == "kbessel") return do_kbessel(c, out);
  if (sub == "threshold-scan") return do_threshold_scan(c, out);
  if (sub == "counterexample") return do_counterexample(c, out);
  if (sub == "verify-counterexample") return do_verify_counterexample(c, out);
  if (sub == "potential-scan") return do_potential_scan(c, out);
  return do_report(root, out.dir());
}

fs::path fresh_run_dir(const fs::path& root, const std::string& stem) {
  fs::create_directories(root);
  fs::path dir = root / stem;
  for (int k = 1; fs::exists(dir); ++k) dir = root / (stem + "_" + std::to_string(k));
  fs::create_directories(dir);
  return dir;
}

// Flag values land here; only flags given on the command line are copied
// over the file config.
struct Flags {
  RunConfig v;
  double alpha = 0.0;
  std::vector<std::string> tolerance;
  std::string config;
  std::string out = "runs";
};

void add_flags(CLI::App* app, Flags& f) {
  app->add_option("--d", f.v.d, "Lattice dimension");
  app->add_option("--M", f.v.M, "Window half-width (normstar: |j|_inf bound)");
  app->add_option("--R", f.v.R, "Weight radius");
  app->add_option("--R-list", f.v.R_list, "Radii to scan (comma separated)")->delimiter(',');
  app->add_option("--alpha", f.alpha, "Weight strength; overrides the --c rule");
  app->add_option("--c", f.v.c, "Rule constant in alpha = c R log R");
  app->add_option("--L", f.v.L, "Potential sup bound");
  app->add_option("--A", f.v.A, "Trajectory l2 bound");
  app->add_option("--mu", f.v.mu, "Decay rate of the datum or weight");
  app->add_option("--beta-max", f.v.beta_max, "Largest |beta|");
  app->add_option("--trials", f.v.trials, "Random trials");
  app->add_option("--seed", f.v.seed, "Base seed");
  app->add_option("--dt", f.v.dt, "Time step");
  app->add_option("--T", f.v.T, "Final time");
  app->add_option("--mode", f.v.mode, "Subcommand mode");
  app->add_option("--normalization", f.v.normalization, "site_origin or full_norm");
  app->add_option("--tolerance", f.tolerance, "NAME=VALUE, repeatable");
  app->add_option("--config", f.config, "Flat JSON config or a run manifest");
  app->add_option("--out", f.out, "Output root directory");
}

void apply_flags(const CLI::App* app, const Flags& f, RunConfig& c) {
  auto given = [&](const char* name) { return app->get_option(name)->count() > 0; };
  if (given("--d")) c.d = f.v.d;
  if (given("--M")) c.M = f.v.M;
  if (given("--R")) c.R = f.v.R;
  if (given("--R-list")) c.R_list = f.v.R_list;
  if (given("--alpha")) c.alpha = f.alpha;
  if (given("--c")) c.c = f.v.c;
  if (given("--L")) c.L = f.v.L;
  if (given("--A")) c.A = f.v.A;
  if (given("--mu")) c.mu = f.v.mu;
  if (given("--beta-max")) c.beta_max = f.v.beta_max;
  if (given("--trials")) c.trials = f.v.trials;
  if (given("--seed")) c.seed = f.v.seed;
  if (given("--dt")) c.dt = f.v.dt;
  if (given("--T")) c.T = f.v.T;
  if (given("--mode")) c.mode = f.v.mode;
  if (given("--normalization")) c.normalization = f.v.normalization;
  for (const auto& t : f.tolerance) {
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::Config, "--tolerance expects NAME=VALUE, got " + t);
    try {
      std::size_t used = 0;
      const double x = std::stod(t.substr(eq + 1), &used);
      if (used != t.size() - eq - 1) throw std::invalid_argument(t);
      c.tolerance[t.substr(0, eq)] = x;
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Config, "--tolerance value for " + t.substr(0, eq) + " is not a number");
    }
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete Schrodinger Carleman verification toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  Flags flags;
  for (const auto& [name, desc] : subcommands()) {
    auto* sub = app.add_subcommand(name, desc);
    add_flags(sub, flags);
    const auto cols = tsv_columns(name);
    std::string footer = "Writes <out>/" + name + "_s<seed>_<UTC time>/ with " + name + ".json and manifest.json.";
    if (!cols.empty()) footer += "\nTSV " + name + ".tsv columns: " + cols;
    sub->footer(footer);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    RunConfig cfg = defaults_for(name);
    if (!flags.config.empty()) cfg = load_config(flags.config, cfg);
    apply_flags(sub, flags, cfg);
    auto exp = cfg.experiment();
    const bool radii_in_window = name == "logconvexity" || name == "evolve" ||
                                 (name == "lambda-scan" && cfg.mode != "counterexample");
    if (!radii_in_window) exp.R_list.clear();
    exp.validate();

    RunManifest manifest;
    manifest.subcommand = name;
    manifest.config = cfg;
    const auto start = std::chrono::system_clock::now();
    manifest.started = utc_stamp(start, "%Y-%m-%dT%H:%M:%SZ");
    manifest.input_hash = io::git_blob_hash(json{{"subcommand", name}, {"config", cfg.to_json()}}.dump());

    const fs::path root(flags.out);
    RunOutput run_out(fresh_run_dir(root, name + "_s" + std::to_string(cfg.seed) + "_" +
                                              utc_stamp(start, "%Y%m%dT%H%M%SZ")));
    Outcome outcome = dispatch(name, cfg, run_out, root);

    json checks = json::array();
    bool all = true;
    for (const auto& r : outcome.checks) {
      checks.push_back(carleman::to_json(r));
      all = all && r.pass;
      out << (r.pass ? "PASS " : "FAIL ") << r.check << " defect=" << short_fmt(r.defect)
          << " tol=" << short_fmt(r.tolerance) << "\n";
    }
    run_out.write_json(name + ".json", {{"subcommand", name}, {"checks", checks}, {"result", outcome.result}});
    manifest.checks = checks;
    manifest.outputs = run_out.files();
    manifest.finished = utc_stamp(std::chrono::system_clock::now(), "%Y-%m-%dT%H:%M:%SZ");
    std::ofstream(run_out.dir() / "manifest.json") << manifest.to_json().dump(2) << "\n";
    out << "run directory: " << run_out.dir().string() << "\n";
    return all ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (e.is_numeric()) return 3;
    switch (e.kind()) {
      case ErrorKind::ToleranceExceeded:
      case ErrorKind::VerificationFailure:
        return 1;
      default:
        return 2;
    }
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace carleman::cli
