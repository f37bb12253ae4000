#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "carleman/lattice/field.hpp"
#include "carleman/numeric/quadrature.hpp"

namespace carleman::evolution {

using lattice::Complex;
using lattice::LatticeField;
using lattice::LatticeWindow;
using lattice::Potential;

inline constexpr std::string_view kSchemeTag = "trapezoidal_unitary";

struct EvolutionConfig {
  double dt = 1e-3;     // negative steps run the scheme backward
  double T = 1.0;
  LatticeWindow window{1, 32};
  Potential potential{LatticeWindow{1, 32}};
  /// Uniform snapshots every `snapshot_stride` steps; 0 picks T/10 spacing.
  int snapshot_stride = 0;
  /// Time rule whose nodes also get snapshots (by a partial step from the
  /// preceding grid point). Defaults to observation_rule().
  num::QuadratureRule time_rule = observation_rule();
  double solver_tolerance = 1e-12;

  static num::QuadratureRule observation_rule(int nodes_per_piece = 8);
  int steps() const;
  void validate() const;
};

/// Stored states of one run.
struct Trajectory {
  LatticeWindow window{1, 2};
  double dt = 0.0;
  double T = 0.0;
  std::vector<double> times;         // uniform snapshot times, t_0 = 0
  std::vector<LatticeField> snapshots;
  std::vector<double> norm2;         // ||u(t_n)||^2 per uniform snapshot
  num::QuadratureRule time_rule = num::QuadratureRule::gauss_legendre(1);
  std::vector<LatticeField> node_snapshots;  // at time_rule nodes
  double scale = 1.0;                // product of normalizations applied
  double max_step_drift = 0.0;       // max per-step relative norm change
  std::string potential_hash;

  lattice::SpaceTimeField space_time() const;
  const LatticeField& initial() const { return snapshots.front(); }
  const LatticeField& final() const { return snapshots.back(); }
  Trajectory scaled(double s) const;
};

/// (I - i dt/2 H) u_{n+1} = (I + i dt/2 H) u_n, H = Delta_d + V, each step
/// solved by Jacobi iteration; throws SolverDivergence if the relative
/// residual stays above cfg.solver_tolerance.
Trajectory evolve(const LatticeField& u0, const EvolutionConfig& cfg);

/// One trapezoidal step of size tau.
LatticeField trapezoidal_step(const LatticeField& u, const Potential& V, double tau, double tolerance = 1e-12);

enum class Normalization { SiteOrigin, FullNorm };
std::string_view to_string(Normalization n) noexcept;
Normalization parse_normalization(std::string_view s);

/// Observation integral: int_{3/8}^{5/8} |u_0(t)|^2 dt (SiteOrigin) or
/// ||u(0)||^2 (FullNorm).
double observation_integral(const Trajectory& traj, Normalization mode = Normalization::SiteOrigin);

/// Rescales so the observation integral is 1. Throws ZeroObservation when
/// it is below 1e-300.
Trajectory normalize_observation(const Trajectory& traj, Normalization mode = Normalization::SiteOrigin);

/// u_j(t) = e^{-2it} i^{|j|} J_{|j|}(2t): the d = 1 free solution from delta_0.
Complex fundamental_solution(int j, double t);

/// sum_k (i t H)^k / k! u0 with V = 0, until terms drop below 1e-18 ||u0||.
LatticeField taylor_propagate(const LatticeField& u0, double t);

/// Field files per uniform snapshot plus manifest.json (dt, T, scheme,
/// potential hash, files). Returns the manifest path.
std::filesystem::path write_trajectory(const Trajectory& traj, const std::filesystem::path& dir,
                                       const std::string& stem);

/// git-style hash of the encoded potential.
std::string potential_hash(const Potential& V);

}  // namespace carleman::evolution
