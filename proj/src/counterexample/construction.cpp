#include "carleman/counterexample/construction.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "carleman/error.hpp"
#include "carleman/io/field_io.hpp"
#include "carleman/parallel.hpp"

namespace carleman::counterexample {

namespace {

constexpr std::array<std::array<int, 2>, 4> kNeighbours{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

Site site(int j1, int j2) { return Site{j1, j2, 0, 0}; }

std::string site_string(const Site& j) { return "(" + std::to_string(j[0]) + "," + std::to_string(j[1]) + ")"; }

using Matrix = std::vector<std::vector<Rational>>;

// Rows of A spanning its row space, by exact elimination.
Matrix independent_rows(const Matrix& A) {
  Matrix basis, reduced;
  for (const auto& row : A) {
    std::vector<Rational> r = row;
    for (std::size_t b = 0; b < reduced.size(); ++b) {
      const auto& piv = reduced[b];
      std::size_t p = 0;
      while (piv[p] == 0) ++p;
      if (r[p] != 0) {
        const Rational f = r[p] / piv[p];
        for (std::size_t k = 0; k < r.size(); ++k) r[k] -= f * piv[k];
      }
    }
    if (std::any_of(r.begin(), r.end(), [](const Rational& x) { return x != 0; })) {
      reduced.push_back(r);
      basis.push_back(row);
    }
  }
  return basis;
}

// Gauss-Jordan on a nonsingular square system.
std::vector<Rational> solve(Matrix G, std::vector<Rational> rhs) {
  const std::size_t n = G.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && G[p][c] == 0) ++p;
    if (p == n) throw Error(ErrorKind::RepairInfeasible, "singular normal equations");
    std::swap(G[p], G[c]);
    std::swap(rhs[p], rhs[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || G[r][c] == 0) continue;
      const Rational f = G[r][c] / G[c][c];
      for (std::size_t k = c; k < n; ++k) G[r][k] -= f * G[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  for (std::size_t c = 0; c < n; ++c) rhs[c] /= G[c][c];
  return rhs;
}

Dyadic literal_row_value(const Site& j, int R) {
  const int a = std::abs(j[0]);
  const int j2 = j[1];
  const int off = std::abs(j2 - R);
  if (j2 <= R - 3) return Dyadic::pow2(-(a + std::abs(j2)));
  if (j2 >= R + 3) return Dyadic::pow2(-(a + std::abs(j2) - 6));
  if (off == 2) return Dyadic::pow2(-(a + R - 5), -1);
  if (off == 1) return Dyadic::pow2(-(a + R - 6));
  return Dyadic::pow2(-(a + R - 6), -1);
}

std::size_t orbit_of(const std::vector<Site>& reps, const Site& offset) {
  const Site rep = site(std::abs(offset[0]), std::abs(offset[1]));
  for (std::size_t i = 0; i < reps.size(); ++i)
    if (reps[i] == rep) return i;
  throw Error(ErrorKind::InvalidArgument, "offset is not on the ring");
}

// Bound on |u_j| <= 2^{c - |j|_1} read off one exact value.
int decay_exponent(const Dyadic& v, const Site& j) {
  const Integer m = boost::multiprecision::abs(v.mantissa());
  const int bits = static_cast<int>(boost::multiprecision::msb(m));
  const int ceil_log2 = v.exponent() + bits + (m == (Integer(1) << bits) ? 0 : 1);
  return ceil_log2 + std::abs(j[0]) + std::abs(j[1]);
}

}  // namespace

std::string_view to_string(ValueMode m) noexcept { return m == ValueMode::LiteralPaper ? "literal_paper" : "repaired"; }

ValueMode parse_value_mode(std::string_view s) {
  if (s == "literal_paper" || s == "literal") return ValueMode::LiteralPaper;
  if (s == "repaired") return ValueMode::Repaired;
  throw Error(ErrorKind::Config, "unknown counterexample mode '" + std::string(s) + "'");
}

lattice::LatticeWindow CounterexampleSpec::window() const { return lattice::LatticeWindow(2, std::max(R + margin, 2 * R)); }

void CounterexampleSpec::validate() const {
  if (R < 8) throw Error(ErrorKind::InvalidArgument, "counterexample needs R >= 8");
  if (margin < 1) throw Error(ErrorKind::InvalidArgument, "counterexample margin must be >= 1");
}

int diamond_distance(const Site& j, int R) noexcept { return std::abs(j[0]) + std::abs(j[1] - R); }

RingRepair repair_ring(int R) {
  RingRepair rr;
  for (int a = 0; a <= 3; ++a) {
    const Site rep = site(a, 3 - a);
    rr.representatives.push_back(rep);
    rr.multiplicity.push_back((a == 0 || a == 3) ? 2 : 4);
    rr.formula_values.push_back(literal_row_value(site(a, R + 3 - a), R));
  }
  const std::size_t n = rr.representatives.size();

  Matrix A;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; a + b <= 2; ++b) {
      std::vector<Rational> row(n, Rational(0));
      bool nontrivial = false;
      for (const auto& e : kNeighbours) {
        const Site nb = site(a + e[0], b + e[1]);
        if (std::abs(nb[0]) + std::abs(nb[1]) == 3) {
          row[orbit_of(rr.representatives, nb)] += 1;
          nontrivial = true;
        }
      }
      if (nontrivial) A.push_back(row);
    }
  rr.equations = static_cast<int>(A.size());
  const Matrix B = independent_rows(A);
  rr.rank = static_cast<int>(B.size());
  if (rr.rank >= static_cast<int>(n))
    throw Error(ErrorKind::RepairInfeasible, "harmonicity forces the ring to vanish (rank " + std::to_string(rr.rank) +
                                                 " of " + std::to_string(n) + " unknowns)");

  // x = p - W^{-1} B^T y with (B W^{-1} B^T) y = B p
  std::vector<Rational> p(n), winv(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = rr.formula_values[i].to_rational();
    winv[i] = Rational(1, rr.multiplicity[i]);
  }
  Matrix G(B.size(), std::vector<Rational>(B.size(), Rational(0)));
  std::vector<Rational> rhs(B.size(), Rational(0));
  for (std::size_t r = 0; r < B.size(); ++r) {
    for (std::size_t s = 0; s < B.size(); ++s)
      for (std::size_t i = 0; i < n; ++i) G[r][s] += B[r][i] * winv[i] * B[s][i];
    for (std::size_t i = 0; i < n; ++i) rhs[r] += B[r][i] * p[i];
  }
  const auto y = solve(G, rhs);
  for (std::size_t i = 0; i < n; ++i) {
    Rational x = p[i];
    for (std::size_t r = 0; r < B.size(); ++r) x -= winv[i] * B[r][i] * y[r];
    const auto d = Dyadic::from_rational(x);
    if (!d) throw Error(ErrorKind::RepairInfeasible, "repaired ring value " + rational_string(x) + " is not dyadic");
    if (d->is_zero())
      throw Error(ErrorKind::RepairInfeasible, "repaired ring value vanishes at offset " + site_string(rr.representatives[i]));
    rr.repaired_values.push_back(*d);
  }
  return rr;
}

Counterexample::Counterexample(CounterexampleSpec spec)
    : spec_(spec), repair_((spec.validate(), repair_ring(spec.R))), u_(spec.window()) {
  const auto& w = u_.window();
  w.for_each_site([&](std::size_t i, const Site& j) { u_[i] = value_at(j); });
  V_.resize(w.site_count());
  parallel_for(w.site_count(), [&](std::size_t i) { V_[i] = potential_at(w.site(i)); });
}

Dyadic Counterexample::formula_value(const Site& j) const { return literal_row_value(j, spec_.R); }

Dyadic Counterexample::value_at(const Site& j) const {
  const int dist = diamond_distance(j, spec_.R);
  if (dist <= 2) return Dyadic();
  if (dist == 3 && spec_.mode == ValueMode::Repaired)
    return repair_.repaired_values[orbit_of(repair_.representatives, site(j[0], j[1] - spec_.R))];
  return formula_value(j);
}

Dyadic Counterexample::laplacian_at(const Site& j) const {
  Dyadic s = Dyadic(Integer(-4), 0) * value_at(j);
  for (const auto& e : kNeighbours) s += value_at(site(j[0] + e[0], j[1] + e[1]));
  return s;
}

Rational Counterexample::potential_at(const Site& j) const {
  const Dyadic u = value_at(j);
  if (u.is_zero()) return Rational(0);
  return -laplacian_at(j).to_rational() / u.to_rational();
}

lattice::LatticeField Counterexample::field() const {
  lattice::LatticeField f(u_.window());
  for (std::size_t i = 0; i < u_.window().site_count(); ++i) f[i] = u_[i].to_double();
  return f;
}

lattice::Potential Counterexample::potential() const {
  std::vector<lattice::Complex> v(V_.size());
  for (std::size_t i = 0; i < V_.size(); ++i) {
    const auto d = Dyadic::from_rational(V_[i]);
    v[i] = d ? d->to_double() : static_cast<double>(V_[i]);
  }
  return lattice::Potential(u_.window(), std::move(v));
}

Rational Counterexample::potential_sup() const {
  Rational sup = 0;
  for (const auto& v : V_) sup = std::max(sup, Rational(boost::multiprecision::abs(v)));
  return sup;
}

Counterexample build_counterexample(const CounterexampleSpec& spec) { return Counterexample(spec); }

VerificationReport verify_counterexample(const Counterexample& ce) {
  const auto& spec = ce.spec();
  const auto& w = ce.u().window();
  VerificationReport rep;
  rep.R = spec.R;
  rep.mode = spec.mode;

  struct SiteOutcome {
    std::optional<SiteResidual> vanish, harmonic, equation;
    int decay = INT32_MIN;
  };
  const auto outcomes = parallel_map<SiteOutcome>(w.site_count(), [&](std::size_t i) {
    SiteOutcome o;
    const Site j = w.site(i);
    const Dyadic& u = ce.u()[i];
    const Dyadic lap = ce.laplacian_at(j);
    if (diamond_distance(j, spec.R) <= 2) {
      if (!u.is_zero()) o.vanish = SiteResidual{j, u.to_rational()};
      if (!lap.is_zero()) o.harmonic = SiteResidual{j, lap.to_rational()};
    }
    const Rational r = lap.to_rational() + ce.V()[i] * u.to_rational();
    if (r != 0) o.equation = SiteResidual{j, r};
    if (!u.is_zero()) o.decay = decay_exponent(u, j);
    return o;
  });
  rep.decay_constant = INT32_MIN;
  for (const auto& o : outcomes) {
    if (o.vanish) rep.vanishing_failures.push_back(*o.vanish);
    if (o.harmonic) rep.harmonic_failures.push_back(*o.harmonic);
    if (o.equation) rep.equation_failures.push_back(*o.equation);
    rep.decay_constant = std::max(rep.decay_constant, o.decay);
  }
  rep.vanishing = rep.vanishing_failures.empty();
  rep.harmonic_on_diamond = rep.harmonic_failures.empty();
  rep.equation = rep.equation_failures.empty();
  rep.origin = ce.u().at(site(0, 0)) == Dyadic::pow2(0);

  // Each row formula keeps log2|u_j| + |j|_1 fixed along the row and every
  // row reaches the window edge, so |u_j| <= 2^{C - |j|_1} outside as well.
  // Sites with |j|_1 = n number 4n, and leaving the window means |j|_1 >= N:
  //   sum_{n >= N} 4n 4^{C-n} = 4^{C+1} 4^{-N} (4/9) (3N + 1).
  const int N = w.half_width() + 1;
  const int C = rep.decay_constant;
  Rational pow4 = 1;
  const int e = C + 1 - N;
  if (e >= 0)
    pow4 = Rational(Integer(1) << (2 * e));
  else
    pow4 = Rational(Integer(1), Integer(1) << (-2 * e));
  rep.tail_bound = pow4 * Rational(4 * (3 * N + 1), 9);
  rep.tail = rep.tail_bound < Rational(Integer(1), Integer(1) << spec.margin);
  return rep;
}

std::string rational_string(const Rational& q) {
  if (const auto d = Dyadic::from_rational(q)) return d->to_string();
  return q.str();
}

namespace {

nlohmann::json residual_list(const std::vector<SiteResidual>& v) {
  auto out = nlohmann::json::array();
  for (const auto& r : v) out.push_back({{"site", {r.site[0], r.site[1]}}, {"residual", rational_string(r.residual)}});
  return out;
}

}  // namespace

nlohmann::json VerificationReport::to_json() const {
  return {{"R", R},
          {"mode", to_string(mode)},
          {"checks",
           {{"vanishing_diamond", vanishing},
            {"harmonic_on_diamond", harmonic_on_diamond},
            {"equation_with_V", equation},
            {"l2_tail_certificate", tail},
            {"origin_value_one", origin}}},
          {"all_pass", all_pass()},
          {"vanishing_failures", residual_list(vanishing_failures)},
          {"harmonic_failures", residual_list(harmonic_failures)},
          {"equation_failures", residual_list(equation_failures)},
          {"decay_constant", decay_constant},
          {"tail_bound", rational_string(tail_bound)},
          {"tail_bound_log2", std::log2(static_cast<double>(tail_bound))}};
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  auto line = [&](const char* name, bool ok) { os << (ok ? "PASS " : "FAIL ") << name << '\n'; };
  os << "counterexample R=" << R << " mode=" << to_string(mode) << '\n';
  line("vanishing diamond", vanishing);
  line("harmonic on diamond", harmonic_on_diamond);
  line("equation (Delta + V) u = 0", equation);
  line("l2 tail certificate", tail);
  line("u(0,0) = 1", origin);
  auto list = [&](const char* name, const std::vector<SiteResidual>& v) {
    for (const auto& r : v) os << "  " << name << ' ' << site_string(r.site) << " residual " << rational_string(r.residual) << '\n';
  };
  list("vanishing", vanishing_failures);
  list("harmonic", harmonic_failures);
  list("equation", equation_failures);
  os << "tail bound " << rational_string(tail_bound) << " (|u_j| <= 2^(" << decay_constant << " - |j|_1))\n";
  return os.str();
}

void require_verified(const VerificationReport& report) {
  if (report.all_pass()) return;
  std::string msg = "counterexample checks failed at";
  std::size_t shown = 0;
  for (const auto* list : {&report.vanishing_failures, &report.harmonic_failures, &report.equation_failures})
    for (const auto& r : *list)
      if (shown++ < 20) msg += " " + site_string(r.site) + "=" + rational_string(r.residual);
  if (!report.tail) msg += " tail";
  if (!report.origin) msg += " origin";
  throw Error(ErrorKind::VerificationFailure, msg);
}

nlohmann::json PotentialBoundScan::to_json() const {
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < R.size(); ++i) rows.push_back({{"R", R[i]}, {"sup_V", rational_string(sup[i])}});
  return {{"rows", rows}, {"identical", identical}};
}

PotentialBoundScan potential_bound_scan(const std::vector<int>& R_list, int margin) {
  PotentialBoundScan scan;
  scan.R = R_list;
  scan.sup = parallel_map<Rational>(R_list.size(), [&](std::size_t i) {
    return Counterexample(CounterexampleSpec{R_list[i], margin, ValueMode::Repaired}).potential_sup();
  });
  scan.identical = !scan.sup.empty() &&
                   std::all_of(scan.sup.begin(), scan.sup.end(), [&](const Rational& s) { return s == scan.sup.front(); });
  return scan;
}

std::vector<std::filesystem::path> write_counterexample(const Counterexample& ce, const VerificationReport& report,
                                                        const std::filesystem::path& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> files;
  const nlohmann::json meta{{"R", ce.spec().R}, {"mode", to_string(ce.spec().mode)}, {"margin", ce.spec().margin}};
  const auto u_path = dir / (stem + "_u.field");
  files.push_back(u_path);
  files.push_back(io::write_field(u_path, ce.field(), meta));
  const auto V = ce.potential();
  const auto vv = V.values();
  const auto V_path = dir / (stem + "_V.field");
  files.push_back(V_path);
  files.push_back(io::write_field(V_path, lattice::LatticeField(V.window(), {vv.begin(), vv.end()}), meta));

  auto exact = nlohmann::json::array();
  const auto& w = ce.u().window();
  w.for_each_site([&](std::size_t i, const Site& j) {
    if (diamond_distance(j, ce.spec().R) > 5 || ce.u()[i].is_zero()) return;
    auto entry = ce.u()[i].to_json();
    entry["site"] = {j[0], j[1]};
    exact.push_back(entry);
  });
  const auto exact_path = dir / (stem + "_exact.json");
  std::ofstream(exact_path) << nlohmann::json{{"R", ce.spec().R}, {"mode", to_string(ce.spec().mode)}, {"values", exact}}.dump(1) << '\n';
  files.push_back(exact_path);

  const auto report_path = dir / (stem + "_report.json");
  std::ofstream(report_path) << report.to_json().dump(2) << '\n';
  files.push_back(report_path);
  const auto text_path = dir / (stem + "_report.txt");
  std::ofstream(text_path) << report.to_text();
  files.push_back(text_path);
  for (const auto& f : files)
    if (!std::filesystem::exists(f)) throw Error(ErrorKind::Io, "failed to write " + f.string());
  return files;
}

}  // namespace carleman::counterexample
