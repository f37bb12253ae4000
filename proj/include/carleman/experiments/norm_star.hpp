#pragma once

#include <array>

#include "carleman/report.hpp"

namespace carleman::experiments {

/// ||j||_* = sum_k |j_k| log(|j_k| + 1).
double norm_star(const int* j, int d) noexcept;

struct NormStarResult {
  int d = 1;
  int j_max = 0;
  double sup_ratio = 0.0;  // of ||j||_* / (|j| log(|j|+1))
  double inf_ratio = 0.0;
  std::array<int, 3> argsup{};
  std::array<int, 3> arginf{};
  double c_d = 0.0;        // max(sup, 1/inf)
  CheckReport report;
};

/// Exhaustive over |j|_inf <= j_max, j != 0 (d <= 3), visiting one point per
/// orbit of coordinate permutations and sign changes.
NormStarResult norm_star_equivalence(int d, int j_max);

}  // namespace carleman::experiments
