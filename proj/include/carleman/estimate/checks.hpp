#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "carleman/estimate/operators.hpp"
#include "carleman/estimate/test_functions.hpp"
#include "carleman/report.hpp"

namespace carleman::estimate {

/// Batch parameters shared by the randomized operator checks.
struct CheckConfig {
  WeightSpec spec;
  int M = 0;            // window half-width; 0 picks ceil(R) + 3
  int trials = 50;
  std::uint64_t seed = 1;
  int terms = 3;        // tensor terms per test function
  int inset = 3;        // support stays this far inside the window
  int nodes_per_piece = 16;
  std::optional<double> tolerance = std::nullopt;  // overrides the check's default

  lattice::LatticeWindow window() const;
  nlohmann::json params() const;
};

inline constexpr double kConjugationTolerance = 1e-9;
inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kCommutatorTolerance = 1e-8;
inline constexpr double kPositivityTolerance = 1e-12;

/// ||(S + A) f - e^{W}(i d/dt + Delta_d)(e^{-W} f)|| / ||f||, with the right
/// side built from exp(W_j - W_{j +- e_k}) directly.
double conjugation_defect(const JetSource& f, const WeightSpec& spec, const num::QuadratureRule& rule);
CheckReport conjugation_check(const CheckConfig& cfg);

struct SymmetryDefects {
  double S = 0.0;          // |<Sf,g> - <f,Sg>| / (||f|| ||g||)
  double A = 0.0;          // |<Af,g> + <f,Ag>| / (||f|| ||g||)
  double S_diagonal = 0.0; // |Im <Sf,f>| / ||f||^2
  double A_diagonal = 0.0; // |Re <Af,f>| / ||f||^2
};

SymmetryDefects symmetry_defects(const JetSource& f, const JetSource& g, const WeightSpec& spec,
                                 const num::QuadratureRule& rule);
CheckReport symmetry_check(const CheckConfig& cfg);

/// Time-integrated terms of the commutator expansion.
struct CommutatorTerms {
  double zeroth = 0.0;      // 4 sinh(2a/R^2) sum sinh^2(...) |f|^2
  double difference = 0.0;  // 4 sinh(2a/R^2) sum |f_{j+e} - f_{j-e}|^2 / 4
  double profile = 0.0;     // 2 alpha sum [(j1/R + phi) phi'' + phi'^2] |f|^2
  double mixed = 0.0;       // (8 alpha / R) sum phi' cosh(...) Im(f_{j+e1} conj f_j)
  double total() const noexcept { return zeroth + difference + profile + mixed; }
};

CommutatorTerms commutator_terms(const JetSource& f, const WeightSpec& spec, const num::QuadratureRule& rule);
/// The four-term right side, summed.
double commutator_form(const JetSource& f, const WeightSpec& spec, const num::QuadratureRule& rule);

struct CommutatorSample {
  std::complex<double> lhs;  // <(SA - AS) f, f> by composing the operators
  double rhs = 0.0;          // commutator_form
  double norm2 = 0.0;        // ||f||^2
  double conjugated_norm2 = 0.0;  // ||S f + A f||^2
  double defect() const noexcept;
};

CommutatorSample commutator_sample(const JetSource& f, const WeightSpec& spec, const num::QuadratureRule& rule);
/// |LHS - RHS| <= tol (|LHS| + ||f||^2) per trial, and ||Sf + Af||^2 >= LHS.
CheckReport commutator_check(const CheckConfig& cfg);
/// commutator_form >= -tol ||f||^2 on random f; meant for constant phi.
CheckReport positivity_check(const CheckConfig& cfg);

/// Smallest c with sqrt(sinh(2a/R^2)) sinh(2a/(sqrt(d) R)) ||e^W g|| <= c ||e^W (i d/dt + Delta_d) g||.
/// Throws SupportViolation when g carries relative mass above 1e-14 where
/// |j/R + phi e_1| < 1, InvalidArgument for g = 0.
double carleman_ratio(const JetSource& g, const WeightSpec& spec, const num::QuadratureRule& rule);

struct CarlemanBatch {
  std::vector<double> ratios;  // per trial, index order
  double max_ratio = 0.0;
  std::size_t worst_trial = 0;
};

CarlemanBatch carleman_batch(const CheckConfig& cfg);
/// Counts trials whose ratio exceeds `constant`.
CheckReport carleman_holdout(const CheckConfig& cfg, double constant);

}  // namespace carleman::estimate
