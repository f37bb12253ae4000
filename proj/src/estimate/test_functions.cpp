#include "carleman/estimate/test_functions.hpp"

#include <cmath>
#include <random>

#include "carleman/error.hpp"

namespace carleman::estimate {

using lattice::LatticeWindow;
using lattice::Site;

double bump(double t) noexcept {
  if (t <= kBumpStart || t >= kBumpEnd) return 0.0;
  const double p = (t - kBumpStart) * (kBumpEnd - t);
  return p * p * p;
}

double bump_d1(double t) noexcept {
  if (t <= kBumpStart || t >= kBumpEnd) return 0.0;
  const double p = (t - kBumpStart) * (kBumpEnd - t);
  return 3.0 * p * p * (kBumpStart + kBumpEnd - 2.0 * t);
}

namespace {

std::vector<Complex> gaussian_interior(const LatticeWindow& w, int inset, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> out(w.site_count());
  w.for_each_site([&](std::size_t i, const Site& j) {
    // draw for every site so the stream does not depend on inset
    const double re = g(rng), im = g(rng);
    if (lattice::max_norm(j, w.dimension()) <= w.half_width() - inset) out[i] = {re, im};
  });
  return out;
}

}  // namespace

TensorTestFunction::TensorTestFunction(LatticeWindow window, std::vector<std::vector<Complex>> spatial)
    : window_(window), spatial_(std::move(spatial)) {
  for (const auto& h : spatial_)
    if (h.size() != window_.site_count()) throw Error(ErrorKind::InvalidArgument, "coefficient size mismatch");
}

TensorTestFunction TensorTestFunction::random(const LatticeWindow& window, int terms, int inset, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Complex>> spatial;
  for (int m = 0; m < terms; ++m) spatial.push_back(gaussian_interior(window, inset, rng));
  return TensorTestFunction(window, std::move(spatial));
}

void TensorTestFunction::evaluate(double t, std::span<Complex> value, std::span<Complex> dt) const {
  std::fill(value.begin(), value.end(), Complex{});
  std::fill(dt.begin(), dt.end(), Complex{});
  const double b = bump(t), db = bump_d1(t);
  if (b == 0.0 && db == 0.0) return;
  const double tau = t - 0.5;
  double power = 1.0, dpower = 0.0;  // tau^m and m tau^{m-1}
  for (std::size_t m = 0; m < spatial_.size(); ++m) {
    const double psi = b * power;
    const double dpsi = db * power + b * dpower;
    const auto& h = spatial_[m];
    for (std::size_t i = 0; i < h.size(); ++i) {
      value[i] += psi * h[i];
      dt[i] += dpsi * h[i];
    }
    dpower = dpower * tau + power;
    power *= tau;
  }
}

AdmissibleField::AdmissibleField(LatticeWindow window, WeightSpec spec, std::vector<Complex> xi)
    : window_(window), spec_(std::move(spec)), xi_(std::move(xi)) {}

AdmissibleField AdmissibleField::random(const LatticeWindow& window, const WeightSpec& spec, int inset,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return AdmissibleField(window, spec, gaussian_interior(window, inset, rng));
}

void AdmissibleField::evaluate(double t, std::span<Complex> value, std::span<Complex> dt) const {
  const double b = bump(t), db = bump_d1(t);
  const double phi = spec_.phi.value(t), dphi = spec_.phi.d1(t);
  const CutoffSet cut{spec_.R};
  const int d = window_.dimension();
  window_.for_each_site([&](std::size_t i, const Site& j) {
    const double r = shifted_radius(j, phi, spec_.R, d);
    const double x1 = j[0] / spec_.R + phi;
    const double m = cut.mu(r);
    // d/dt mu(r) = mu'(r) x_1 phi' / r
    const double dm = r > 0.0 ? cut.mu_d1(r) * x1 * dphi / r : 0.0;
    value[i] = b * m * xi_[i];
    dt[i] = (db * m + b * dm) * xi_[i];
  });
}

num::QuadratureRule check_time_rule(int nodes_per_piece) {
  static constexpr double breaks[] = {0.0, 0.125, 0.25, 0.375, 0.625, 0.75, 0.875, 1.0};
  return num::QuadratureRule::composite(breaks, nodes_per_piece);
}

lattice::SpaceTimeField sample(const JetSource& f, const num::QuadratureRule& rule) {
  lattice::SpaceTimeField out(f.window(), rule, true);
  const auto nodes = rule.nodes();
  for (std::size_t n = 0; n < nodes.size(); ++n) f.evaluate(nodes[n], out.slice(n), out.derivative(n));
  return out;
}

}  // namespace carleman::estimate
