#include "carleman/lattice/field.hpp"

#include <cmath>
#include <string>

#include "carleman/error.hpp"
#include "carleman/numeric/reduce.hpp"
#include "carleman/simd/kernels.hpp"

namespace carleman::lattice {

namespace {

double* raw(std::span<Complex> s) { return reinterpret_cast<double*>(s.data()); }
const double* raw(std::span<const Complex> s) { return reinterpret_cast<const double*>(s.data()); }

void require_size(std::size_t got, const LatticeWindow& w) {
  if (got != w.site_count()) throw Error(ErrorKind::InvalidArgument, "field size does not match window");
}

}  // namespace

LatticeField::LatticeField(LatticeWindow window) : window_(window), values_(window.site_count()) {}

LatticeField::LatticeField(LatticeWindow window, std::vector<Complex> values)
    : window_(window), values_(std::move(values)) {
  require_size(values_.size(), window_);
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorKind::NonFinite, "lattice field value not finite");
}

double LatticeField::norm2() const noexcept { return num::pairwise_norm2(values_); }

SpaceTimeField::SpaceTimeField(LatticeWindow window, num::QuadratureRule rule, bool with_derivative)
    : window_(window), rule_(std::move(rule)) {
  values_.assign(rule_.size(), std::vector<Complex>(window_.site_count()));
  if (with_derivative) derivative_.assign(rule_.size(), std::vector<Complex>(window_.site_count()));
}

LatticeField SpaceTimeField::slice_field(std::size_t node) const { return LatticeField(window_, values_.at(node)); }

double SpaceTimeField::norm2() const noexcept {
  std::vector<double> per_node(rule_.size());
  for (std::size_t n = 0; n < rule_.size(); ++n) per_node[n] = rule_.weights()[n] * num::pairwise_norm2(values_[n]);
  return num::pairwise_sum(per_node);
}

Potential::Potential(LatticeWindow window) : window_(window), values_(window.site_count()) {}

Potential::Potential(LatticeWindow window, std::vector<Complex> values) : window_(window), values_(std::move(values)) {
  require_size(values_.size(), window_);
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorKind::NonFinite, "potential value not finite");
    sup_ = std::max(sup_, std::abs(v));
  }
}

bool Potential::is_real() const noexcept {
  for (const auto& v : values_)
    if (v.imag() != 0.0) return false;
  return true;
}

void neighbor_sum(std::span<const Complex> u, std::span<Complex> out, const LatticeWindow& w) {
  require_size(u.size(), w);
  require_size(out.size(), w);
  const auto& k = simd::active();
  std::fill(out.begin(), out.end(), Complex{});
  const std::size_t n = static_cast<std::size_t>(w.extent());
  const double* in = raw(u);
  double* o = raw(out);
  for (int axis = 0; axis < w.dimension(); ++axis) {
    const std::size_t s = w.stride(axis);
    const std::size_t outer = w.site_count() / (n * s);
    for (std::size_t b = 0; b < outer; ++b) {
      const std::size_t first = b * n * s;        // p = 0
      const std::size_t last = first + (n - 1) * s;  // p = n - 1
      k.add1(o + 2 * first, in + 2 * (first + s), 2 * s);
      k.add2(o + 2 * (first + s), in + 2 * first, in + 2 * (first + 2 * s), 2 * (n - 2) * s);
      k.add1(o + 2 * last, in + 2 * (last - s), 2 * s);
    }
  }
}

void discrete_laplacian(std::span<const Complex> u, std::span<Complex> out, const LatticeWindow& w) {
  neighbor_sum(u, out, w);
  simd::active().axpy(raw(out), -2.0 * w.dimension(), raw(u), 2 * u.size());
}

LatticeField discrete_laplacian(const LatticeField& u) {
  LatticeField out(u.window());
  discrete_laplacian(u.values(), out.values(), u.window());
  return out;
}

void apply_hamiltonian(std::span<const Complex> u, std::span<Complex> out, const Potential& V) {
  discrete_laplacian(u, out, V.window());
  if (!V.is_zero()) simd::active().cmul_acc(raw(out), raw(V.values()), raw(u), u.size());
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) noexcept {
  std::vector<Complex> p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] * std::conj(b[i]);
  return num::pairwise_sum(std::span<const Complex>(p));
}

num::LogScalar weighted_l2(const LatticeField& u, const SiteLogWeight& w) {
  std::vector<double> logs;
  logs.reserve(u.values().size());
  u.window().for_each_site([&](std::size_t i, const Site& j) {
    const double a2 = std::norm(u[i]);
    if (a2 == 0.0) return;
    const num::LogScalar wj = w(j);
    if (wj.is_zero()) return;
    logs.push_back(2.0 * wj.log_mag() + std::log(a2));
  });
  return num::log_sum_exp(logs).sqrt();
}

num::LogScalar weighted_l2(const SpaceTimeField& u, const SpaceTimeLogWeight& w) {
  std::vector<double> logs;
  const auto nodes = u.time_rule().nodes();
  const auto weights = u.time_rule().weights();
  for (std::size_t n = 0; n < u.node_count(); ++n) {
    const auto slice = u.slice(n);
    const double lw = std::log(weights[n]);
    u.window().for_each_site([&](std::size_t i, const Site& j) {
      const double a2 = std::norm(slice[i]);
      if (a2 == 0.0) return;
      const num::LogScalar wj = w(j, nodes[n]);
      if (wj.is_zero()) return;
      logs.push_back(lw + 2.0 * wj.log_mag() + std::log(a2));
    });
  }
  return num::log_sum_exp(logs).sqrt();
}

namespace {

void check_ring(const LatticeWindow& w, double R) {
  if (!(R + 1.0 < w.half_width()))
    throw Error(ErrorKind::RingOutsideWindow,
                "ring R=" + std::to_string(R) + " needs R+1 < M=" + std::to_string(w.half_width()));
}

bool in_ring(const Site& j, int d, double R) {
  const double r = euclidean_norm(j, d);
  return r >= R - 2.0 && r <= R + 1.0;
}

// Squared ring mass, rescaled by the largest entry so deep tails do not underflow.
num::LogScalar ring_sum(std::span<const Complex> u, const LatticeWindow& w, double R) {
  std::vector<Complex> picked;
  double scale = 0.0;
  w.for_each_site([&](std::size_t i, const Site& j) {
    if (in_ring(j, w.dimension(), R)) {
      picked.push_back(u[i]);
      scale = std::max(scale, std::abs(u[i]));
    }
  });
  if (scale == 0.0) return num::LogScalar::zero();
  for (auto& v : picked) v /= scale;
  return num::LogScalar::from_log(2.0 * std::log(scale) + std::log(num::pairwise_norm2(picked)));
}

double shell_sum(std::span<const Complex> u, const LatticeWindow& w) {
  std::vector<Complex> picked;
  const int edge = w.half_width() - 2;
  w.for_each_site([&](std::size_t i, const Site& j) {
    if (max_norm(j, w.dimension()) > edge) picked.push_back(u[i]);
  });
  return num::pairwise_norm2(picked);
}

}  // namespace

num::LogScalar ring_mass(const LatticeField& u, double R) {
  check_ring(u.window(), R);
  return ring_sum(u.values(), u.window(), R).sqrt();
}

num::LogScalar ring_mass(const SpaceTimeField& u, double R) {
  check_ring(u.window(), R);
  std::vector<num::LogScalar> per_node(u.node_count());
  for (std::size_t n = 0; n < u.node_count(); ++n)
    per_node[n] = num::LogScalar::from_double(u.time_rule().weights()[n]) * ring_sum(u.slice(n), u.window(), R);
  return num::log_sum(per_node).sqrt();
}

double boundary_mass_fraction(const LatticeField& u) noexcept {
  const double total = u.norm2();
  return total > 0.0 ? shell_sum(u.values(), u.window()) / total : 0.0;
}

double boundary_mass_fraction(const SpaceTimeField& u) noexcept {
  double worst = 0.0;
  for (std::size_t n = 0; n < u.node_count(); ++n) {
    const auto s = u.slice(n);
    const double total = num::pairwise_norm2(s);
    if (total > 0.0) worst = std::max(worst, shell_sum(s, u.window()) / total);
  }
  return worst;
}

}  // namespace carleman::lattice
