#include "carleman/estimate/checks.hpp"

#include <cmath>

#include "carleman/error.hpp"
#include "carleman/parallel.hpp"
#include "carleman/random.hpp"

namespace carleman::estimate {

using detail::FieldDD;
using lattice::LatticeWindow;
using lattice::Site;
using num::ComplexDD;
using num::DoubleDouble;

namespace {

struct Jets {
  std::vector<FieldDD> value, dt;
};

Jets sample_dd(const JetSource& f, const num::QuadratureRule& rule) {
  const auto s = sample(f, rule);
  Jets out;
  for (std::size_t n = 0; n < rule.size(); ++n) {
    out.value.push_back(detail::to_dd(s.slice(n)));
    out.dt.push_back(detail::to_dd(s.derivative(n)));
  }
  return out;
}

// sum_j a_j conj(b_j)
ComplexDD dot(const FieldDD& a, const FieldDD& b) {
  ComplexDD acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * num::conj(b[i]);
  return acc;
}

DoubleDouble norm2(const FieldDD& a) {
  DoubleDouble acc;
  for (const auto& z : a) acc += num::norm(z);
  return acc;
}

double abs(const ComplexDD& z) { return std::sqrt(num::norm(z).to_double()); }

double norm2(const Jets& f, const num::QuadratureRule& rule) {
  DoubleDouble acc;
  const auto w = rule.weights();
  for (std::size_t n = 0; n < rule.size(); ++n) acc += DoubleDouble(w[n]) * norm2(f.value[n]);
  return acc.to_double();
}

std::uint64_t f_seed(const CheckConfig& cfg, std::size_t trial) { return trial_seed(cfg.seed, 2 * trial); }
std::uint64_t g_seed(const CheckConfig& cfg, std::size_t trial) { return trial_seed(cfg.seed, 2 * trial + 1); }

TensorTestFunction trial_function(const CheckConfig& cfg, std::uint64_t seed) {
  return TensorTestFunction::random(cfg.window(), cfg.terms, cfg.inset, seed);
}

// Batch driver: per-trial defects in index order, worst trial recorded.
CheckReport run_batch(const CheckConfig& cfg, const std::string& name, double default_tol,
                      const std::function<double(std::size_t)>& trial) {
  CheckReport rep;
  rep.check = name;
  rep.params = cfg.params();
  rep.tolerance = cfg.tolerance.value_or(default_tol);
  const auto defects = parallel_map<double>(static_cast<std::size_t>(cfg.trials), trial);
  std::size_t worst = 0;
  for (std::size_t i = 0; i < defects.size(); ++i) {
    if (!std::isfinite(defects[i])) throw Error(ErrorKind::NonFinite, name + " produced a non-finite defect");
    if (defects[i] > defects[worst]) worst = i;
  }
  rep.defect = defects.empty() ? 0.0 : defects[worst];
  rep.pass = rep.defect <= rep.tolerance;
  rep.details["trial_defects"] = defects;
  rep.details["worst_trial"] = worst;
  rep.details["worst_trial_seed"] = f_seed(cfg, worst);
  return rep;
}

}  // namespace

LatticeWindow CheckConfig::window() const {
  const int half = M > 0 ? M : static_cast<int>(std::ceil(spec.R)) + 3;
  return LatticeWindow(spec.d, half);
}

nlohmann::json CheckConfig::params() const {
  return {{"d", spec.d},
          {"R", spec.R},
          {"alpha", spec.alpha},
          {"phi", std::string(to_string(spec.phi.kind()))},
          {"phi_constant", spec.phi.constant_value()},
          {"M", window().half_width()},
          {"trials", trials},
          {"seed", seed},
          {"terms", terms},
          {"nodes_per_piece", nodes_per_piece}};
}

double conjugation_defect(const JetSource& f, const WeightSpec& spec, const num::QuadratureRule& rule) {
  const LatticeWindow& w = f.window();
  const int d = spec.d, M = w.half_width();
  const Jets jf = sample_dd(f, rule);
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  const DoubleDouble R(spec.R), alpha(spec.alpha);
  DoubleDouble defect;
  FieldDD Sf, Af;
  std::vector<DoubleDouble> W(w.site_count());
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const detail::OperatorsAt ops(spec, w, nodes[n]);
    ops.S(jf.value[n], jf.dt[n], Sf);
    ops.A(jf.value[n], Af);
    const DoubleDouble phi(ops.phi()), dphi(ops.phi_d1());
    w.for_each_site([&](std::size_t i, const Site& j) {
      DoubleDouble s;
      for (int k = 0; k < d; ++k) {
        DoubleDouble x = DoubleDouble(j[k]) / R;
        if (k == 0) x = x + phi;
        s += x * x;
      }
      W[i] = alpha * s;
    });
    const FieldDD& fv = jf.value[n];
    DoubleDouble slice;
    w.for_each_site([&](std::size_t i, const Site& j) {
      // e^{W} i d/dt (e^{-W} f) = i f' - i W' f, W' = 2 alpha x_1 phi'
      const DoubleDouble x1 = DoubleDouble(j[0]) / R + phi;
      const DoubleDouble dW = DoubleDouble(2.0) * alpha * x1 * dphi;
      ComplexDD o = num::times_i(jf.dt[n][i]) - dW * num::times_i(fv[i]) - DoubleDouble(2.0 * d) * fv[i];
      for (int k = 0; k < d; ++k) {
        const std::size_t s = w.stride(k);
        if (j[k] < M) o += num::exp(W[i] - W[i + s]) * fv[i + s];
        if (j[k] > -M) o += num::exp(W[i] - W[i - s]) * fv[i - s];
      }
      slice += num::norm(Sf[i] + Af[i] - o);
    });
    defect += DoubleDouble(weights[n]) * slice;
  }
  const double f2 = norm2(jf, rule);
  if (f2 == 0.0) return 0.0;
  return std::sqrt(defect.to_double() / f2);
}

CheckReport conjugation_check(const CheckConfig& cfg) {
  const auto rule = check_time_rule(cfg.nodes_per_piece);
  return run_batch(cfg, "conjugation", kConjugationTolerance, [&](std::size_t t) {
    return conjugation_defect(trial_function(cfg, f_seed(cfg, t)), cfg.spec, rule);
  });
}

SymmetryDefects symmetry_defects(const JetSource& f, const JetSource& g, const WeightSpec& spec,
                                 const num::QuadratureRule& rule) {
  const Jets jf = sample_dd(f, rule), jg = sample_dd(g, rule);
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  ComplexDD s_fg, s_gf, a_fg, a_gf, s_ff, a_ff;
  FieldDD Sf, Sg, Af, Ag;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const detail::OperatorsAt ops(spec, f.window(), nodes[n]);
    ops.S(jf.value[n], jf.dt[n], Sf);
    ops.S(jg.value[n], jg.dt[n], Sg);
    ops.A(jf.value[n], Af);
    ops.A(jg.value[n], Ag);
    const DoubleDouble wn(weights[n]);
    s_fg += wn * dot(Sf, jg.value[n]);
    s_gf += wn * dot(jf.value[n], Sg);
    a_fg += wn * dot(Af, jg.value[n]);
    a_gf += wn * dot(jf.value[n], Ag);
    s_ff += wn * dot(Sf, jf.value[n]);
    a_ff += wn * dot(Af, jf.value[n]);
  }
  const double nf = std::sqrt(norm2(jf, rule)), ng = std::sqrt(norm2(jg, rule));
  SymmetryDefects out;
  if (nf == 0.0 || ng == 0.0) return out;
  out.S = abs(s_fg - s_gf) / (nf * ng);
  out.A = abs(a_fg + a_gf) / (nf * ng);
  out.S_diagonal = std::fabs(s_ff.im.to_double()) / (nf * nf);
  out.A_diagonal = std::fabs(a_ff.re.to_double()) / (nf * nf);
  return out;
}

CheckReport symmetry_check(const CheckConfig& cfg) {
  const auto rule = check_time_rule(cfg.nodes_per_piece);
  std::vector<SymmetryDefects> all(static_cast<std::size_t>(cfg.trials));
  auto rep = run_batch(cfg, "symmetry", kSymmetryTolerance, [&](std::size_t t) {
    all[t] = symmetry_defects(trial_function(cfg, f_seed(cfg, t)), trial_function(cfg, g_seed(cfg, t)), cfg.spec, rule);
    return std::max(all[t].S, all[t].A);
  });
  double s = 0, a = 0, sd = 0, ad = 0;
  for (const auto& x : all) {
    s = std::max(s, x.S);
    a = std::max(a, x.A);
    sd = std::max(sd, x.S_diagonal);
    ad = std::max(ad, x.A_diagonal);
  }
  rep.details["S_defect"] = s;
  rep.details["A_defect"] = a;
  rep.details["S_diagonal_imag"] = sd;
  rep.details["A_diagonal_real"] = ad;
  return rep;
}

CommutatorTerms commutator_terms(const JetSource& f, const WeightSpec& spec, const num::QuadratureRule& rule) {
  const LatticeWindow& w = f.window();
  const int d = spec.d, M = w.half_width();
  const Jets jf = sample_dd(f, rule);
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  const DoubleDouble R(spec.R), alpha(spec.alpha);
  const DoubleDouble scale = DoubleDouble(2.0 * spec.alpha) / R;
  const DoubleDouble sh0 = num::sinh(scale / R);  // sinh(2 alpha / R^2)
  const DoubleDouble four_sh0 = DoubleDouble(4.0) * sh0;
  DoubleDouble zeroth, diff, prof, mixed;
  std::vector<DoubleDouble> sinh2((2 * M + 1) * d);
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const detail::OperatorsAt ops(spec, w, nodes[n]);
    const DoubleDouble phi(ops.phi()), dphi(ops.phi_d1()), ddphi(ops.phi_d2());
    for (int k = 0; k < d; ++k) {
      for (int c = -M; c <= M; ++c) {
        DoubleDouble x = DoubleDouble(c) / R;
        if (k == 0) x = x + phi;
        const DoubleDouble s = num::sinh(scale * x);
        sinh2[k * (2 * M + 1) + (c + M)] = s * s;
      }
    }
    const FieldDD& fv = jf.value[n];
    DoubleDouble z, df, pr, mx;
    w.for_each_site([&](std::size_t i, const Site& j) {
      const DoubleDouble a2 = num::norm(fv[i]);
      for (int k = 0; k < d; ++k) {
        z += sinh2[k * (2 * M + 1) + (j[k] + M)] * a2;
        const std::size_t s = w.stride(k);
        const ComplexDD fwd = j[k] < M ? fv[i + s] : ComplexDD{};
        const ComplexDD bwd = j[k] > -M ? fv[i - s] : ComplexDD{};
        df += num::norm(fwd - bwd);
      }
      const DoubleDouble x1 = ops.shifted_first(j[0]);
      pr += (x1 * ddphi + dphi * dphi) * a2;
      if (j[0] < M) {
        // Im(f_{j+e1} conj(f_j))
        const ComplexDD p = fv[i + w.stride(0)] * num::conj(fv[i]);
        mx += ops.cosh_a(0, j[0]) * p.im;
      }
    });
    const DoubleDouble wn(weights[n]);
    zeroth += wn * z;
    diff += wn * df;
    prof += wn * pr;
    mixed += wn * dphi * mx;
  }
  CommutatorTerms out;
  out.zeroth = (four_sh0 * zeroth).to_double();
  out.difference = (sh0 * diff).to_double();  // 4 sinh * |.|^2 / 4
  out.profile = (DoubleDouble(2.0) * alpha * prof).to_double();
  out.mixed = (DoubleDouble(8.0) * alpha / R * mixed).to_double();
  return out;
}

double commutator_form(const JetSource& f, const WeightSpec& spec, const num::QuadratureRule& rule) {
  return commutator_terms(f, spec, rule).total();
}

double CommutatorSample::defect() const noexcept { return std::abs(lhs - rhs) / (std::abs(lhs) + norm2); }

CommutatorSample commutator_sample(const JetSource& f, const WeightSpec& spec, const num::QuadratureRule& rule) {
  const Jets jf = sample_dd(f, rule);
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  ComplexDD lhs;
  DoubleDouble conj_norm;
  FieldDD Af, dAf, SAf, Sf, ASf;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const detail::OperatorsAt ops(spec, f.window(), nodes[n]);
    ops.A(jf.value[n], Af);
    ops.A_dt(jf.value[n], jf.dt[n], dAf);
    ops.S(Af, dAf, SAf);
    ops.S(jf.value[n], jf.dt[n], Sf);
    ops.A(Sf, ASf);
    const DoubleDouble wn(weights[n]);
    lhs += wn * (dot(SAf, jf.value[n]) - dot(ASf, jf.value[n]));
    DoubleDouble c;
    for (std::size_t i = 0; i < Sf.size(); ++i) c += num::norm(Sf[i] + Af[i]);
    conj_norm += wn * c;
  }
  CommutatorSample out;
  out.lhs = lhs.to_complex();
  out.rhs = commutator_form(f, spec, rule);
  out.norm2 = norm2(jf, rule);
  out.conjugated_norm2 = conj_norm.to_double();
  return out;
}

CheckReport commutator_check(const CheckConfig& cfg) {
  const auto rule = check_time_rule(cfg.nodes_per_piece);
  const double tol = cfg.tolerance.value_or(kCommutatorTolerance);
  std::vector<CommutatorSample> samples(static_cast<std::size_t>(cfg.trials));
  auto rep = run_batch(cfg, "commutator", kCommutatorTolerance, [&](std::size_t t) {
    samples[t] = commutator_sample(trial_function(cfg, f_seed(cfg, t)), cfg.spec, rule);
    return samples[t].defect();
  });
  // ||Sf + Af||^2 = ||Sf||^2 + ||Af||^2 + <[S,A] f, f> >= <[S,A] f, f>
  std::size_t violations = 0;
  for (const auto& s : samples) {
    const double slack = tol * (std::abs(s.lhs) + s.norm2);
    if (s.conjugated_norm2 < s.lhs.real() - slack) ++violations;
  }
  rep.details["lower_bound_violations"] = violations;
  rep.pass = rep.pass && violations == 0;
  return rep;
}

CheckReport positivity_check(const CheckConfig& cfg) {
  const auto rule = check_time_rule(cfg.nodes_per_piece);
  return run_batch(cfg, "stationary_positivity", kPositivityTolerance, [&](std::size_t t) {
    const auto f = trial_function(cfg, f_seed(cfg, t));
    const double form = commutator_form(f, cfg.spec, rule);
    const double f2 = norm2(sample_dd(f, rule), rule);
    // defect > 0 only when the form dips below zero
    return std::max(0.0, -form / f2);
  });
}

double carleman_ratio(const JetSource& g, const WeightSpec& spec, const num::QuadratureRule& rule) {
  const LatticeWindow& w = g.window();
  const auto s = sample(g, rule);
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  std::vector<double> log_g, log_pg;
  double total = 0.0, outside = 0.0;
  std::vector<lattice::Complex> lap(w.site_count());
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const double t = nodes[n];
    const double phi = spec.phi.value(t);
    const double log_w = std::log(weights[n]);
    const auto gv = s.slice(n);
    const auto gt = s.derivative(n);
    lattice::discrete_laplacian(gv, lap, w);
    w.for_each_site([&](std::size_t i, const Site& j) {
      const double a2 = std::norm(gv[i]);
      const double r = shifted_radius(j, phi, spec.R, spec.d);
      total += weights[n] * a2;
      if (r * r < 1.0) outside += weights[n] * a2;
      const double two_W = 2.0 * spec.alpha * r * r;
      if (a2 > 0.0) log_g.push_back(log_w + two_W + std::log(a2));
      const double p2 = std::norm(lattice::Complex(0.0, 1.0) * gt[i] + lap[i]);
      if (p2 > 0.0) log_pg.push_back(log_w + two_W + std::log(p2));
    });
  }
  if (total == 0.0) throw Error(ErrorKind::InvalidArgument, "carleman_ratio of the zero field");
  if (outside > 1e-14 * total)
    throw Error(ErrorKind::SupportViolation, "g has relative mass " + std::to_string(outside / total) +
                                                 " where |j/R + phi e1| < 1");
  const double log_ng = 0.5 * num::log_sum_exp(log_g).log_mag();
  const double log_npg = 0.5 * num::log_sum_exp(log_pg).log_mag();
  const double log_lhs = 0.5 * num::log_sinh(2.0 * spec.alpha / (spec.R * spec.R)) +
                         num::log_sinh(2.0 * spec.alpha / (std::sqrt(static_cast<double>(spec.d)) * spec.R));
  return std::exp(log_lhs + log_ng - log_npg);
}

CarlemanBatch carleman_batch(const CheckConfig& cfg) {
  const auto rule = check_time_rule(cfg.nodes_per_piece);
  CarlemanBatch out;
  out.ratios = parallel_map<double>(static_cast<std::size_t>(cfg.trials), [&](std::size_t t) {
    return carleman_ratio(AdmissibleField::random(cfg.window(), cfg.spec, cfg.inset, f_seed(cfg, t)), cfg.spec, rule);
  });
  for (std::size_t i = 0; i < out.ratios.size(); ++i)
    if (out.ratios[i] > out.ratios[out.worst_trial]) out.worst_trial = i;
  out.max_ratio = out.ratios.empty() ? 0.0 : out.ratios[out.worst_trial];
  return out;
}

CheckReport carleman_holdout(const CheckConfig& cfg, double constant) {
  const auto batch = carleman_batch(cfg);
  CheckReport rep;
  rep.check = "carleman_inequality";
  rep.params = cfg.params();
  rep.params["constant"] = constant;
  std::size_t violations = 0;
  for (double r : batch.ratios) violations += r > constant ? 1 : 0;
  rep.defect = static_cast<double>(violations);
  rep.tolerance = 0.0;
  rep.pass = violations == 0;
  rep.details["max_ratio"] = batch.max_ratio;
  rep.details["worst_trial"] = batch.worst_trial;
  rep.details["worst_trial_seed"] = f_seed(cfg, batch.worst_trial);
  return rep;
}

}  // namespace carleman::estimate
