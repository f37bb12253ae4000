#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace carleman::lattice {

inline constexpr int kMaxDimension = 4;

/// Lattice site; only the first `dimension` entries are meaningful.
using Site = std::array<int, kMaxDimension>;

/// Box {j in Z^d : max_k |j_k| <= M} with zero padding outside.
/// Sites are stored row-major, j_1 slowest.
class LatticeWindow {
 public:
  LatticeWindow(int dimension, int half_width);

  int dimension() const noexcept { return d_; }
  int half_width() const noexcept { return M_; }
  int extent() const noexcept { return 2 * M_ + 1; }
  std::size_t site_count() const noexcept { return count_; }
  /// Index step for a unit move along axis k (0-based).
  std::size_t stride(int axis) const noexcept { return strides_[axis]; }

  std::size_t index(const Site& j) const noexcept;
  Site site(std::size_t index) const noexcept;
  bool contains(const Site& j) const noexcept;

  /// Calls f(index, site) for every site in storage order.
  template <class F>
  void for_each_site(F&& f) const {
    Site j{};
    for (int k = 0; k < d_; ++k) j[k] = -M_;
    for (std::size_t i = 0; i < count_; ++i) {
      f(i, static_cast<const Site&>(j));
      for (int k = d_ - 1; k >= 0; --k) {
        if (++j[k] <= M_) break;
        j[k] = -M_;
      }
    }
  }

  friend bool operator==(const LatticeWindow&, const LatticeWindow&) = default;

 private:
  int d_;
  int M_;
  std::size_t count_;
  std::array<std::size_t, kMaxDimension> strides_{};
};

double euclidean_norm(const Site& j, int dimension) noexcept;
double euclidean_norm2(const Site& j, int dimension) noexcept;
int max_norm(const Site& j, int dimension) noexcept;

}  // namespace carleman::lattice
