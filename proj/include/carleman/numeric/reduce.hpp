#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace carleman::num {

// Fixed-shape pairwise reductions. The split point depends only on the
// length, so results are bit-identical however the inputs were produced.

double pairwise_sum(std::span<const double> x) noexcept;
std::complex<double> pairwise_sum(std::span<const std::complex<double>> x) noexcept;

/// Sum of |x_i|^2 with the same tree shape.
double pairwise_norm2(std::span<const std::complex<double>> x) noexcept;

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace carleman::num
