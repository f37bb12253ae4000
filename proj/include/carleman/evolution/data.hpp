#pragma once

#include <cstdint>
#include <string_view>

#include "carleman/lattice/field.hpp"

namespace carleman::evolution {

enum class DatumKind { Delta, Gaussian, BesselLike };

struct DatumProfile {
  DatumKind kind = DatumKind::Delta;
  double parameter = 0.0;  // a for Gaussian e^{-a|j|^2}, mu for e^{-mu|j|log(|j|+1)}

  static DatumProfile delta() { return {DatumKind::Delta, 0.0}; }
  static DatumProfile gaussian(double a) { return {DatumKind::Gaussian, a}; }
  static DatumProfile bessel_like(double mu) { return {DatumKind::BesselLike, mu}; }
};

DatumProfile parse_datum(std::string_view name, double parameter);

/// Unnormalized amplitude at site j.
double datum_amplitude(const lattice::Site& j, int d, const DatumProfile& p);

/// Datum on the window, normalized to ||u||_2 = 1.
lattice::LatticeField make_decaying_datum(const lattice::LatticeWindow& window, const DatumProfile& profile);

/// Seeded real potential with sup |V| = L exactly.
lattice::Potential random_real_potential(const lattice::LatticeWindow& window, double L, std::uint64_t seed);

}  // namespace carleman::evolution
