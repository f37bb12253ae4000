#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "carleman/evolution/evolve.hpp"

namespace carleman::experiments {

struct ExperimentConfig {
  int d = 1;
  int M = 0;              // window half-width; 0 picks max(R_list) + 4
  double A = 1.0;         // trajectory l2 bound
  double L = 0.0;         // potential sup bound
  std::vector<double> R_list;
  double c_rule = 2.0;    // alpha = c R log R
  double mu = 1.0;
  std::uint64_t seed = 1;
  double dt = 1e-3;
  double T = 1.0;
  double beta_max = 2.0;
  evolution::Normalization normalization = evolution::Normalization::SiteOrigin;
  std::map<std::string, double> tolerances;

  int half_width() const;
  lattice::LatticeWindow window() const { return lattice::LatticeWindow(d, half_width()); }
  double tolerance(const std::string& name, double fallback) const;
  void validate() const;
};

}  // namespace carleman::experiments
