#include "carleman/estimate/operators.hpp"

#include "carleman/error.hpp"

namespace carleman::estimate {

using lattice::Complex;
using lattice::LatticeWindow;
using lattice::Site;
using num::ComplexDD;
using num::DoubleDouble;

namespace detail {

FieldDD to_dd(std::span<const Complex> f) {
  FieldDD out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = ComplexDD(f[i]);
  return out;
}

std::vector<Complex> to_complex(const FieldDD& f) {
  std::vector<Complex> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].to_complex();
  return out;
}

OperatorsAt::OperatorsAt(const WeightSpec& spec, const LatticeWindow& window, double t)
    : spec_(spec),
      window_(window),
      phi_(spec.phi.value(t)),
      dphi_(spec.phi.d1(t)),
      ddphi_(spec.phi.d2(t)) {
  if (window.dimension() != spec.d) throw Error(ErrorKind::InvalidArgument, "window and weight dimensions differ");
  const int M = window.half_width();
  const DoubleDouble R(spec.R);
  const DoubleDouble scale = DoubleDouble(2.0 * spec.alpha) / R;  // 2 alpha / R
  const DoubleDouble rate = scale * DoubleDouble(dphi_);          // d a_1 / dt
  axes_.resize(spec.d);
  for (int k = 0; k < spec.d; ++k) {
    AxisTable& tab = axes_[k];
    const std::size_t n = static_cast<std::size_t>(2 * M + 2);
    tab.c.resize(n);
    tab.s.resize(n);
    tab.dc.resize(n);
    tab.ds.resize(n);
    for (int c = -M - 1; c <= M; ++c) {
      DoubleDouble x = DoubleDouble(c + 0.5) / R;
      if (k == 0) x = x + DoubleDouble(phi_);
      const DoubleDouble a = scale * x;
      const std::size_t i = slot(c);
      tab.c[i] = num::cosh(a);
      tab.s[i] = num::sinh(a);
      if (k == 0) {
        tab.dc[i] = tab.s[i] * rate;
        tab.ds[i] = tab.c[i] * rate;
      }
    }
  }
}

DoubleDouble OperatorsAt::shifted_first(int j1) const {
  return DoubleDouble(j1) / DoubleDouble(spec_.R) + DoubleDouble(phi_);
}

void OperatorsAt::S(const FieldDD& f, const FieldDD& ft, FieldDD& out) const {
  const int d = spec_.d, M = window_.half_width();
  out.assign(f.size(), ComplexDD{});
  const DoubleDouble two_d(2.0 * d);
  window_.for_each_site([&](std::size_t i, const Site& j) {
    ComplexDD acc = num::times_i(ft[i]) - two_d * f[i];
    for (int k = 0; k < d; ++k) {
      const std::size_t s = window_.stride(k);
      const AxisTable& tab = axes_[k];
      if (j[k] < M) acc += tab.c[slot(j[k])] * f[i + s];
      if (j[k] > -M) acc += tab.c[slot(j[k] - 1)] * f[i - s];
    }
    out[i] = acc;
  });
}

void OperatorsAt::A(const FieldDD& f, FieldDD& out) const {
  const int d = spec_.d, M = window_.half_width();
  out.assign(f.size(), ComplexDD{});
  const DoubleDouble two_alpha_dphi = DoubleDouble(2.0 * spec_.alpha) * DoubleDouble(dphi_);
  window_.for_each_site([&](std::size_t i, const Site& j) {
    // -2i alpha (j1/R + phi) phi' f
    const DoubleDouble diag = two_alpha_dphi * shifted_first(j[0]);
    ComplexDD acc = -(diag * num::times_i(f[i]));
    for (int k = 0; k < d; ++k) {
      const std::size_t s = window_.stride(k);
      const AxisTable& tab = axes_[k];
      if (j[k] < M) acc -= tab.s[slot(j[k])] * f[i + s];
      if (j[k] > -M) acc += tab.s[slot(j[k] - 1)] * f[i - s];
    }
    out[i] = acc;
  });
}

void OperatorsAt::A_dt(const FieldDD& f, const FieldDD& ft, FieldDD& out) const {
  const int d = spec_.d, M = window_.half_width();
  out.assign(f.size(), ComplexDD{});
  const DoubleDouble two_alpha(2.0 * spec_.alpha);
  const DoubleDouble dphi(dphi_), ddphi(ddphi_);
  window_.for_each_site([&](std::size_t i, const Site& j) {
    const DoubleDouble x1 = shifted_first(j[0]);
    // d/dt [-2i alpha x1 phi'] = -2i alpha (phi'^2 + x1 phi'')
    const DoubleDouble diag = two_alpha * x1 * dphi;
    const DoubleDouble ddiag = two_alpha * (dphi * dphi + x1 * ddphi);
    ComplexDD acc = -(ddiag * num::times_i(f[i])) - (diag * num::times_i(ft[i]));
    for (int k = 0; k < d; ++k) {
      const std::size_t s = window_.stride(k);
      const AxisTable& tab = axes_[k];
      if (j[k] < M) {
        const std::size_t c = slot(j[k]);
        acc -= tab.s[c] * ft[i + s];
        if (k == 0) acc -= tab.ds[c] * f[i + s];
      }
      if (j[k] > -M) {
        const std::size_t c = slot(j[k] - 1);
        acc += tab.s[c] * ft[i - s];
        if (k == 0) acc += tab.ds[c] * f[i - s];
      }
    }
    out[i] = acc;
  });
}

}  // namespace detail

namespace {

void require_derivative(const lattice::SpaceTimeField& f) {
  if (!f.has_derivative()) throw Error(ErrorKind::InvalidArgument, "operator needs the closed-form time derivative");
}

void store(std::span<Complex> dst, const detail::FieldDD& src) {
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i].to_complex();
}

}  // namespace

lattice::SpaceTimeField apply_S(const lattice::SpaceTimeField& f, const WeightSpec& spec) {
  require_derivative(f);
  lattice::SpaceTimeField out(f.window(), f.time_rule());
  const auto nodes = f.time_rule().nodes();
  detail::FieldDD r;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const detail::OperatorsAt ops(spec, f.window(), nodes[n]);
    ops.S(detail::to_dd(f.slice(n)), detail::to_dd(f.derivative(n)), r);
    store(out.slice(n), r);
  }
  return out;
}

lattice::SpaceTimeField apply_A(const lattice::SpaceTimeField& f, const WeightSpec& spec) {
  lattice::SpaceTimeField out(f.window(), f.time_rule(), f.has_derivative());
  const auto nodes = f.time_rule().nodes();
  detail::FieldDD r;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const detail::OperatorsAt ops(spec, f.window(), nodes[n]);
    const auto fv = detail::to_dd(f.slice(n));
    ops.A(fv, r);
    store(out.slice(n), r);
    if (f.has_derivative()) {
      ops.A_dt(fv, detail::to_dd(f.derivative(n)), r);
      store(out.derivative(n), r);
    }
  }
  return out;
}

}  // namespace carleman::estimate
