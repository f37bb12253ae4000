#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "carleman/counterexample/dyadic.hpp"
#include "carleman/lattice/field.hpp"

namespace carleman::counterexample {

using lattice::Site;

enum class ValueMode { LiteralPaper, Repaired };
std::string_view to_string(ValueMode m) noexcept;
ValueMode parse_value_mode(std::string_view s);

struct CounterexampleSpec {
  int R = 20;
  int margin = 60;
  ValueMode mode = ValueMode::Repaired;

  /// Square window of half-width max(R + margin, 2R).
  lattice::LatticeWindow window() const;
  void validate() const;
};

/// |j_1| + |j_2 - R|: the diamond is <= 2, the ring around it is 3.
int diamond_distance(const Site& j, int R) noexcept;

/// Ring values before and after the repair, one entry per symmetry orbit
/// (j_1 -> -j_1, j_2 - R -> R - j_2) with representative j_1, j_2 - R >= 0.
struct RingRepair {
  std::vector<Site> representatives;  // offsets (j_1, j_2 - R)
  std::vector<int> multiplicity;
  std::vector<Dyadic> formula_values;
  std::vector<Dyadic> repaired_values;
  int equations = 0;  // nontrivial harmonicity equations on the fundamental domain
  int rank = 0;
};

/// Weighted least-squares projection of the formula ring values onto the
/// space where Delta u = 0 on the diamond, solved exactly. Throws
/// RepairInfeasible when the only solution vanishes on the ring or is not
/// dyadic.
RingRepair repair_ring(int R);

class Counterexample {
 public:
  explicit Counterexample(CounterexampleSpec spec);

  const CounterexampleSpec& spec() const noexcept { return spec_; }
  const RingRepair& repair() const noexcept { return repair_; }
  /// u at any site of Z^2, window or not.
  Dyadic value_at(const Site& j) const;
  /// Exact neighbour sum minus 4u.
  Dyadic laplacian_at(const Site& j) const;
  /// -Delta u / u where u != 0, 0 elsewhere.
  Rational potential_at(const Site& j) const;

  const DyadicField& u() const noexcept { return u_; }
  const std::vector<Rational>& V() const noexcept { return V_; }
  lattice::LatticeField field() const;
  lattice::Potential potential() const;
  Rational potential_sup() const;

 private:
  Dyadic formula_value(const Site& j) const;
  CounterexampleSpec spec_;
  RingRepair repair_;
  DyadicField u_;
  std::vector<Rational> V_;
};

Counterexample build_counterexample(const CounterexampleSpec& spec);

struct SiteResidual {
  Site site{};
  Rational residual;
};

struct VerificationReport {
  int R = 0;
  ValueMode mode = ValueMode::Repaired;
  bool vanishing = false;           // u = 0 on the diamond
  bool harmonic_on_diamond = false; // Delta u = 0 there
  bool equation = false;            // (Delta + V) u = 0 on the window
  bool tail = false;                // mass outside the window < 2^-margin
  bool origin = false;              // u(0,0) = 1
  std::vector<SiteResidual> vanishing_failures;
  std::vector<SiteResidual> harmonic_failures;
  std::vector<SiteResidual> equation_failures;
  int decay_constant = 0;           // max over the window of log2|u_j| + |j|_1
  Rational tail_bound;

  bool all_pass() const noexcept { return vanishing && harmonic_on_diamond && equation && tail && origin; }
  nlohmann::json to_json() const;
  std::string to_text() const;
};

VerificationReport verify_counterexample(const Counterexample& ce);
/// Throws VerificationFailure naming the offending sites.
void require_verified(const VerificationReport& report);

struct PotentialBoundScan {
  std::vector<int> R;
  std::vector<Rational> sup;
  bool identical = false;
  nlohmann::json to_json() const;
};

PotentialBoundScan potential_bound_scan(const std::vector<int>& R_list, int margin = 60);

/// Binary fields for u and V, an exact-values sidecar for sites with
/// |j_1| + |j_2 - R| <= 5, and the text report. Returns the files written.
std::vector<std::filesystem::path> write_counterexample(const Counterexample& ce, const VerificationReport& report,
                                                        const std::filesystem::path& dir, const std::string& stem);

std::string rational_string(const Rational& q);

}  // namespace carleman::counterexample
