#include "carleman/estimate/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "carleman/error.hpp"

namespace carleman::estimate {

namespace {

// h = 1 / (1 + e^q) with q = 1/s - 1/(1-s); h' = h (1-h) r with
// r = 1/s^2 + 1/(1-s)^2.
struct StepParts {
  double h;
  double one_minus_h;
};

StepParts step_parts(double s) noexcept {
  const double q = 1.0 / s - 1.0 / (1.0 - s);
  if (q > 0.0) {
    const double e = std::exp(-q);
    return {e / (1.0 + e), 1.0 / (1.0 + e)};
  }
  const double e = std::exp(q);
  return {1.0 / (1.0 + e), e / (1.0 + e)};
}

// Golden-section maximization of |g| on [a, b] after a coarse scan.
double sup_abs(const std::function<double(double)>& g, double a, double b) {
  constexpr int kSamples = 2000;
  double best = 0.0, best_t = a;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = a + (b - a) * i / kSamples;
    const double v = std::fabs(g(t));
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  const double h = (b - a) / kSamples;
  double lo = std::max(a, best_t - h), hi = std::min(b, best_t + h);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = std::fabs(g(x1)), f2 = std::fabs(g(x2));
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = std::fabs(g(x2));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = std::fabs(g(x1));
    }
  }
  return std::max({best, f1, f2});
}

constexpr double kRiseStart = 0.25, kRiseEnd = 0.375, kFallStart = 0.625, kFallEnd = 0.75;
constexpr double kPlateau = 3.0;
constexpr double kSlope = 8.0;  // 1 / (3/8 - 1/4)

}  // namespace

double smooth_step(double s) noexcept {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return step_parts(s).h;
}

double smooth_step_d1(double s) noexcept {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const auto [h, g] = step_parts(s);
  const double r = 1.0 / (s * s) + 1.0 / ((1.0 - s) * (1.0 - s));
  return h * g * r;
}

double smooth_step_d2(double s) noexcept {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const auto [h, g] = step_parts(s);
  const double r = 1.0 / (s * s) + 1.0 / ((1.0 - s) * (1.0 - s));
  const double dr = -2.0 / (s * s * s) + 2.0 / ((1.0 - s) * (1.0 - s) * (1.0 - s));
  // d/ds [h g] = h' (g - h) = h g r (g - h)
  return h * g * (r * r * (g - h) + dr);
}

std::string_view to_string(ProfileKind k) noexcept {
  switch (k) {
    case ProfileKind::Plateau: return "paper_phi";
    case ProfileKind::Constant: return "constant";
    case ProfileKind::Zero: return "zero";
  }
  return "?";
}

TimeProfile::TimeProfile(ProfileKind kind, double c) : kind_(kind), c_(c) {
  if (kind_ == ProfileKind::Plateau) {
    sup_d1_ = sup_abs([this](double t) { return d1(t); }, kRiseStart, kRiseEnd);
    sup_d2_ = sup_abs([this](double t) { return d2(t); }, kRiseStart, kRiseEnd);
  }
}

TimeProfile TimeProfile::paper_phi() { return TimeProfile(ProfileKind::Plateau, 0.0); }

TimeProfile TimeProfile::constant(double c) {
  return TimeProfile(c == 0.0 ? ProfileKind::Zero : ProfileKind::Constant, c);
}

double TimeProfile::value(double t) const noexcept {
  if (kind_ != ProfileKind::Plateau) return c_;
  if (t <= kRiseStart || t >= kFallEnd) return 0.0;
  if (t < kRiseEnd) return kPlateau * smooth_step(kSlope * (t - kRiseStart));
  if (t <= kFallStart) return kPlateau;
  return kPlateau * smooth_step(kSlope * (kFallEnd - t));
}

double TimeProfile::d1(double t) const noexcept {
  if (kind_ != ProfileKind::Plateau) return 0.0;
  if (t <= kRiseStart || t >= kFallEnd || (t >= kRiseEnd && t <= kFallStart)) return 0.0;
  if (t < kRiseEnd) return kPlateau * kSlope * smooth_step_d1(kSlope * (t - kRiseStart));
  return -kPlateau * kSlope * smooth_step_d1(kSlope * (kFallEnd - t));
}

double TimeProfile::d2(double t) const noexcept {
  if (kind_ != ProfileKind::Plateau) return 0.0;
  if (t <= kRiseStart || t >= kFallEnd || (t >= kRiseEnd && t <= kFallStart)) return 0.0;
  if (t < kRiseEnd) return kPlateau * kSlope * kSlope * smooth_step_d2(kSlope * (t - kRiseStart));
  return kPlateau * kSlope * kSlope * smooth_step_d2(kSlope * (kFallEnd - t));
}

WeightSpec WeightSpec::from_rule(double c, double R, int d, TimeProfile phi) {
  WeightSpec s{c * R * std::log(R), R, phi, d};
  s.validate();
  return s;
}

bool WeightSpec::in_evolution_regime(double c) const noexcept { return alpha >= c * R * std::log(R); }

void WeightSpec::validate() const {
  if (!(alpha >= 0.0) || !(R > 0.0) || !std::isfinite(alpha) || !std::isfinite(R))
    throw Error(ErrorKind::InvalidArgument, "weight needs alpha >= 0 and R > 0");
  if (d < 1 || d > lattice::kMaxDimension) throw Error(ErrorKind::InvalidArgument, "dimension out of range");
}

double shifted_radius(const lattice::Site& j, double phi, double R, int d) noexcept {
  double s = 0.0;
  for (int k = 0; k < d; ++k) {
    const double x = j[k] / R + (k == 0 ? phi : 0.0);
    s += x * x;
  }
  return std::sqrt(s);
}

double weight_exponent(const lattice::Site& j, double t, const WeightSpec& spec) noexcept {
  const double phi = spec.phi.value(t);
  double s = 0.0;
  for (int k = 0; k < spec.d; ++k) {
    const double x = j[k] / spec.R + (k == 0 ? phi : 0.0);
    s += x * x;
  }
  return spec.alpha * s;
}

num::LogScalar weight_at(const lattice::Site& j, double t, const WeightSpec& spec) noexcept {
  return num::LogScalar::from_log(weight_exponent(j, t, spec));
}

}  // namespace carleman::estimate
