#include "carleman/evolution/data.hpp"

#include <cmath>
#include <string>

#include "carleman/error.hpp"
#include "carleman/numeric/reduce.hpp"
#include "carleman/random.hpp"

namespace carleman::evolution {

DatumProfile parse_datum(std::string_view name, double parameter) {
  if (name == "delta") return DatumProfile::delta();
  if (name == "gaussian") {
    if (!(parameter > 0.0)) throw Error(ErrorKind::Config, "gaussian datum needs a > 0");
    return DatumProfile::gaussian(parameter);
  }
  if (name == "bessel_like") {
    if (!(parameter >= 0.0)) throw Error(ErrorKind::Config, "bessel_like datum needs mu >= 0");
    return DatumProfile::bessel_like(parameter);
  }
  throw Error(ErrorKind::Config, "unknown datum '" + std::string(name) + "'");
}

double datum_amplitude(const lattice::Site& j, int d, const DatumProfile& p) {
  const double r = lattice::euclidean_norm(j, d);
  switch (p.kind) {
    case DatumKind::Delta:
      return r == 0.0 ? 1.0 : 0.0;
    case DatumKind::Gaussian:
      return std::exp(-p.parameter * r * r);
    case DatumKind::BesselLike:
      return std::exp(-p.parameter * r * std::log1p(r));
  }
  return 0.0;
}

lattice::LatticeField make_decaying_datum(const lattice::LatticeWindow& window, const DatumProfile& profile) {
  lattice::LatticeField u(window);
  window.for_each_site([&](std::size_t i, const lattice::Site& j) {
    u[i] = datum_amplitude(j, window.dimension(), profile);
  });
  const double n = std::sqrt(u.norm2());
  for (auto& z : u.values()) z /= n;
  return u;
}

lattice::Potential random_real_potential(const lattice::LatticeWindow& window, double L, std::uint64_t seed) {
  if (!(L >= 0.0)) throw Error(ErrorKind::InvalidArgument, "potential bound must be >= 0");
  auto rng = trial_rng(seed, 0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<lattice::Complex> v(window.site_count());
  double sup = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = unit(rng);
    if (std::abs(v[i].real()) > sup) {
      sup = std::abs(v[i].real());
      arg = i;
    }
  }
  if (sup == 0.0) return lattice::Potential(window);
  for (auto& z : v) z *= L / sup;
  v[arg] = std::copysign(L, v[arg].real());
  return lattice::Potential(window, std::move(v));
}

}  // namespace carleman::evolution
