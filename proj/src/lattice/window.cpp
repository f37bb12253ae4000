#include "carleman/lattice/window.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "carleman/error.hpp"

namespace carleman::lattice {

LatticeWindow::LatticeWindow(int dimension, int half_width) : d_(dimension), M_(half_width) {
  if (d_ < 1 || d_ > kMaxDimension)
    throw Error(ErrorKind::InvalidArgument, "dimension must be in [1, " + std::to_string(kMaxDimension) + "]");
  if (M_ < 2) throw Error(ErrorKind::InvalidArgument, "window half-width must be >= 2");
  const std::size_t n = static_cast<std::size_t>(extent());
  count_ = 1;
  for (int k = d_ - 1; k >= 0; --k) {
    strides_[k] = count_;
    count_ *= n;
  }
}

std::size_t LatticeWindow::index(const Site& j) const noexcept {
  std::size_t idx = 0;
  for (int k = 0; k < d_; ++k) idx += static_cast<std::size_t>(j[k] + M_) * strides_[k];
  return idx;
}

Site LatticeWindow::site(std::size_t index) const noexcept {
  Site j{};
  for (int k = 0; k < d_; ++k) {
    j[k] = static_cast<int>(index / strides_[k]) - M_;
    index %= strides_[k];
  }
  return j;
}

bool LatticeWindow::contains(const Site& j) const noexcept {
  for (int k = 0; k < d_; ++k)
    if (std::abs(j[k]) > M_) return false;
  return true;
}

double euclidean_norm2(const Site& j, int dimension) noexcept {
  double s = 0.0;
  for (int k = 0; k < dimension; ++k) s += static_cast<double>(j[k]) * j[k];
  return s;
}

double euclidean_norm(const Site& j, int dimension) noexcept { return std::sqrt(euclidean_norm2(j, dimension)); }

int max_norm(const Site& j, int dimension) noexcept {
  int m = 0;
  for (int k = 0; k < dimension; ++k) m = std::max(m, std::abs(j[k]));
  return m;
}

}  // namespace carleman::lattice
