#include "carleman/evolution/evolve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "carleman/error.hpp"
#include "carleman/io/field_io.hpp"
#include "carleman/io/hash.hpp"
#include "carleman/numeric/reduce.hpp"
#include "carleman/simd/kernels.hpp"
#include "carleman/special/bessel.hpp"

namespace carleman::evolution {

namespace {

double* raw(std::vector<Complex>& v) { return reinterpret_cast<double*>(v.data()); }

// (I - c H) x = b with c = i tau / 2, split as D x - c N x = b where N is the
// neighbour sum and D = 1 - c (V - 2d). Jacobi: x <- D^{-1} (b + c N x).
class StepSolver {
 public:
  StepSolver(const Potential& V, double tau, double tolerance)
      : w_(V.window()), c_(0.0, 0.5 * tau), tolerance_(tolerance) {
    const std::size_t n = w_.site_count();
    diag_.resize(n);
    inv_diag_.resize(n);
    cvec_.assign(n, c_);
    const double two_d = 2.0 * w_.dimension();
    const auto v = V.values();
    for (std::size_t i = 0; i < n; ++i) {
      diag_[i] = 1.0 - c_ * (v[i] - two_d);
      inv_diag_[i] = 1.0 / diag_[i];
    }
    nb_.resize(n);
    rhs_.resize(n);
    next_.resize(n);
  }

  // b = (I + c H) u
  void explicit_half(const std::vector<Complex>& u, std::vector<Complex>& b) {
    lattice::neighbor_sum(u, nb_, w_);
    const auto& k = simd::active();
    // (I + cH)u = (2 - D) u + c N u
    for (std::size_t i = 0; i < u.size(); ++i) b[i] = (2.0 - diag_[i]) * u[i];
    k.cmul_acc(raw(b), raw(cvec_), raw(nb_), u.size());
  }

  void solve(const std::vector<Complex>& b, std::vector<Complex>& x) {
    const auto& k = simd::active();
    const std::size_t n = b.size();
    x = b;
    const double bnorm = std::sqrt(num::pairwise_norm2(b));
    if (bnorm == 0.0) return;
    double best = INFINITY;
    int stalled = 0;
    for (int iter = 0; iter < 500; ++iter) {
      lattice::neighbor_sum(x, nb_, w_);
      rhs_ = b;
      k.cmul_acc(raw(rhs_), raw(cvec_), raw(nb_), n);
      k.cmul(raw(next_), raw(inv_diag_), raw(rhs_), n);
      double change = 0.0;
      {
        std::vector<Complex>& d = rhs_;
        for (std::size_t i = 0; i < n; ++i) d[i] = next_[i] - x[i];
        change = std::sqrt(num::pairwise_norm2(d));
      }
      x.swap(next_);
      if (change <= 1e-17 * bnorm) break;
      if (change < 0.5 * best) {
        best = change;
        stalled = 0;
      } else if (++stalled >= 3) {
        break;
      }
    }
    const double r = residual(b, x) / bnorm;
    if (!(r <= tolerance_))
      throw Error(ErrorKind::SolverDivergence, "trapezoidal step residual " + std::to_string(r) + " above tolerance");
  }

  double residual(const std::vector<Complex>& b, const std::vector<Complex>& x) {
    lattice::neighbor_sum(x, nb_, w_);
    std::vector<Complex> r(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = diag_[i] * x[i] - c_ * nb_[i] - b[i];
    return std::sqrt(num::pairwise_norm2(r));
  }

  void step(const std::vector<Complex>& u, std::vector<Complex>& out) {
    std::vector<Complex> b(u.size());
    explicit_half(u, b);
    solve(b, out);
  }

 private:
  LatticeWindow w_;
  Complex c_;
  double tolerance_;
  std::vector<Complex> diag_, inv_diag_, cvec_, nb_, rhs_, next_;
};

bool all_finite(const std::vector<Complex>& v) {
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace

num::QuadratureRule EvolutionConfig::observation_rule(int nodes_per_piece) {
  static constexpr std::array<double, 6> breaks{0.0, 0.25, 0.375, 0.625, 0.75, 1.0};
  return num::QuadratureRule::composite(breaks, nodes_per_piece);
}

int EvolutionConfig::steps() const { return static_cast<int>(std::llround(T / std::abs(dt))); }

void EvolutionConfig::validate() const {
  if (!(dt != 0.0) || !std::isfinite(dt) || std::abs(dt) > 0.01)
    throw Error(ErrorKind::InvalidArgument, "dt must be nonzero with |dt| <= 0.01");
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorKind::InvalidArgument, "T must be positive");
  const double ratio = T / std::abs(dt);
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
    throw Error(ErrorKind::InvalidArgument, "T/dt must be an integer");
  if (!(potential.window() == window)) throw Error(ErrorKind::InvalidArgument, "potential window differs from window");
  if (snapshot_stride < 0) throw Error(ErrorKind::InvalidArgument, "snapshot_stride must be >= 0");
  if (!(solver_tolerance > 0.0)) throw Error(ErrorKind::InvalidArgument, "solver_tolerance must be positive");
}

lattice::SpaceTimeField Trajectory::space_time() const {
  if (node_snapshots.size() != time_rule.size())
    throw Error(ErrorKind::InvalidArgument, "trajectory has no snapshots at the time-rule nodes");
  lattice::SpaceTimeField out(window, time_rule);
  for (std::size_t n = 0; n < node_snapshots.size(); ++n) {
    const auto src = node_snapshots[n].values();
    std::copy(src.begin(), src.end(), out.slice(n).begin());
  }
  return out;
}

Trajectory Trajectory::scaled(double s) const {
  Trajectory out = *this;
  for (auto& f : out.snapshots)
    for (auto& z : f.values()) z *= s;
  for (auto& f : out.node_snapshots)
    for (auto& z : f.values()) z *= s;
  for (auto& n : out.norm2) n *= s * s;
  out.scale *= s;
  return out;
}

LatticeField trapezoidal_step(const LatticeField& u, const Potential& V, double tau, double tolerance) {
  if (!(u.window() == V.window())) throw Error(ErrorKind::InvalidArgument, "potential window differs from field");
  StepSolver solver(V, tau, tolerance);
  std::vector<Complex> in(u.values().begin(), u.values().end()), out(in.size());
  solver.step(in, out);
  return LatticeField(u.window(), std::move(out));
}

Trajectory evolve(const LatticeField& u0, const EvolutionConfig& cfg) {
  cfg.validate();
  if (!(u0.window() == cfg.window)) throw Error(ErrorKind::InvalidArgument, "initial field window differs from config");
  if (lattice::boundary_mass_fraction(u0) >= lattice::kBoundaryMassTolerance)
    throw Error(ErrorKind::InvalidArgument, "initial boundary mass fraction above 1e-12");

  const int N = cfg.steps();
  const double tau = cfg.dt;
  const int stride = cfg.snapshot_stride > 0 ? cfg.snapshot_stride : std::max(1, N / 10);

  Trajectory traj;
  traj.window = cfg.window;
  traj.dt = cfg.dt;
  traj.T = cfg.T;
  traj.potential_hash = potential_hash(cfg.potential);

  // Node snapshots only for forward runs covering the rule.
  struct NodeTarget {
    std::size_t node;
    int base_step;
    double offset;
  };
  std::vector<NodeTarget> targets;
  const bool with_nodes = tau > 0.0 && cfg.time_rule.lower() >= 0.0 && cfg.time_rule.upper() <= cfg.T + 1e-12;
  if (with_nodes) {
    traj.time_rule = cfg.time_rule;
    traj.node_snapshots.assign(cfg.time_rule.size(), LatticeField(cfg.window));
    const auto nodes = cfg.time_rule.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const int n = std::min(N, static_cast<int>(std::floor(nodes[i] / tau)));
      targets.push_back({i, n, nodes[i] - n * tau});
    }
    std::sort(targets.begin(), targets.end(), [](const NodeTarget& a, const NodeTarget& b) { return a.base_step < b.base_step; });
  }
  std::size_t next_target = 0;

  StepSolver solver(cfg.potential, tau, cfg.solver_tolerance);
  std::vector<Complex> u(u0.values().begin(), u0.values().end()), v(u.size());
  double prev_norm = num::pairwise_norm2(u);

  auto emit = [&](int n) {
    traj.times.push_back(n * tau);
    traj.snapshots.emplace_back(cfg.window, u);
    traj.norm2.push_back(prev_norm);
  };
  auto branch = [&](int n) {
    while (next_target < targets.size() && targets[next_target].base_step == n) {
      const auto& t = targets[next_target++];
      if (t.offset == 0.0) {
        traj.node_snapshots[t.node] = LatticeField(cfg.window, u);
      } else {
        StepSolver partial(cfg.potential, t.offset, cfg.solver_tolerance);
        std::vector<Complex> w(u.size());
        partial.step(u, w);
        traj.node_snapshots[t.node] = LatticeField(cfg.window, std::move(w));
      }
    }
  };

  emit(0);
  branch(0);
  for (int n = 1; n <= N; ++n) {
    solver.step(u, v);
    u.swap(v);
    if (!all_finite(u)) throw Error(ErrorKind::NonFinite, "evolution produced a non-finite value");
    const double norm = num::pairwise_norm2(u);
    if (prev_norm > 0.0) traj.max_step_drift = std::max(traj.max_step_drift, std::abs(norm - prev_norm) / prev_norm);
    prev_norm = norm;
    if (n % stride == 0 || n == N) emit(n);
    branch(n);
  }
  return traj;
}

std::string_view to_string(Normalization n) noexcept {
  return n == Normalization::SiteOrigin ? "site_origin" : "full_norm";
}

Normalization parse_normalization(std::string_view s) {
  if (s == "site_origin") return Normalization::SiteOrigin;
  if (s == "full_norm") return Normalization::FullNorm;
  throw Error(ErrorKind::Config, "unknown normalization '" + std::string(s) + "'");
}

double observation_integral(const Trajectory& traj, Normalization mode) {
  if (mode == Normalization::FullNorm) return traj.initial().norm2();
  if (traj.node_snapshots.size() != traj.time_rule.size() || traj.node_snapshots.empty())
    throw Error(ErrorKind::InvalidArgument, "site-origin observation needs time-rule snapshots");
  lattice::Site origin{};
  const std::size_t io = traj.window.index(origin);
  const auto x = traj.time_rule.nodes();
  const auto w = traj.time_rule.weights();
  std::vector<double> terms, mass;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.375 || x[i] >= 0.625) continue;
    terms.push_back(w[i] * std::norm(traj.node_snapshots[i][io]));
    mass.push_back(w[i]);
  }
  if (std::abs(num::pairwise_sum(mass) - 0.25) > 1e-13)
    throw Error(ErrorKind::InvalidArgument, "time rule does not break at 3/8 and 5/8");
  return num::pairwise_sum(terms);
}

Trajectory normalize_observation(const Trajectory& traj, Normalization mode) {
  const double I = observation_integral(traj, mode);
  if (!(I >= 1e-300)) throw Error(ErrorKind::ZeroObservation, "observation integral below 1e-300");
  if (I == 1.0) return traj;
  return traj.scaled(1.0 / std::sqrt(I));
}

Complex fundamental_solution(int j, double t) {
  const int n = std::abs(j);
  static constexpr std::array<Complex, 4> ipow{Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)};
  return std::polar(1.0, -2.0 * t) * ipow[n % 4] * special::bessel_j(n, 2.0 * t);
}

LatticeField taylor_propagate(const LatticeField& u0, double t) {
  const auto& w = u0.window();
  Potential zero(w);
  std::vector<Complex> term(u0.values().begin(), u0.values().end()), next(term.size());
  std::vector<double> re_acc, im_acc;
  std::vector<std::vector<Complex>> terms{term};
  const double base = std::sqrt(u0.norm2());
  const double bound = 4.0 * w.dimension() * std::abs(t);
  for (int k = 1; k < 2000; ++k) {
    lattice::apply_hamiltonian(term, next, zero);
    const Complex f(0.0, t / k);
    for (std::size_t i = 0; i < term.size(); ++i) term[i] = f * next[i];
    terms.push_back(term);
    if (k > bound && std::sqrt(num::pairwise_norm2(term)) < 1e-18 * base) break;
  }
  // Sum smallest terms first.
  std::vector<Complex> out(term.size());
  for (auto it = terms.rbegin(); it != terms.rend(); ++it)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += (*it)[i];
  return LatticeField(w, std::move(out));
}

std::string potential_hash(const Potential& V) {
  const auto v = V.values();
  return io::git_blob_hash(io::encode_field(LatticeField(V.window(), std::vector<Complex>(v.begin(), v.end()))));
}

std::filesystem::path write_trajectory(const Trajectory& traj, const std::filesystem::path& dir,
                                       const std::string& stem) {
  std::filesystem::create_directories(dir);
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t n = 0; n < traj.snapshots.size(); ++n) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_t%05zu.field", stem.c_str(), n);
    io::write_field(dir / name, traj.snapshots[n], {{"t", traj.times[n]}, {"norm2", traj.norm2[n]}});
    files.push_back({{"t", traj.times[n]}, {"file", name}, {"sidecar", std::string(name) + ".json"}});
  }
  nlohmann::json manifest{{"dt", traj.dt},
                          {"T", traj.T},
                          {"scheme", kSchemeTag},
                          {"potential_hash", traj.potential_hash},
                          {"dimension", traj.window.dimension()},
                          {"half_width", traj.window.half_width()},
                          {"scale", traj.scale},
                          {"max_step_drift", traj.max_step_drift},
                          {"snapshots", files}};
  const auto path = dir / (stem + "_manifest.json");
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << manifest.dump(2) << '\n';
  return path;
}

}  // namespace carleman::evolution
