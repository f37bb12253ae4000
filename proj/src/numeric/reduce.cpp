#include "carleman/numeric/reduce.hpp"

#include <cmath>

namespace carleman::num {

namespace {
// Leaves of 8 keep the recursion shallow; the shape is still a function of n.
constexpr std::size_t kLeaf = 8;

template <class T, class F>
T tree(std::span<const T> x, F leaf_value) {
  if (x.size() <= kLeaf) {
    T acc{};
    for (const auto& v : x) acc += leaf_value(v);
    return acc;
  }
  const std::size_t half = x.size() / 2;
  return tree<T>(x.first(half), leaf_value) + tree<T>(x.subspan(half), leaf_value);
}
}  // namespace

double pairwise_sum(std::span<const double> x) noexcept {
  return tree<double>(x, [](double v) { return v; });
}

std::complex<double> pairwise_sum(std::span<const std::complex<double>> x) noexcept {
  return tree<std::complex<double>>(x, [](const std::complex<double>& v) { return v; });
}

double pairwise_norm2(std::span<const std::complex<double>> x) noexcept {
  if (x.size() <= kLeaf) {
    double acc = 0.0;
    for (const auto& v : x) acc += std::norm(v);
    return acc;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_norm2(x.first(half)) + pairwise_norm2(x.subspan(half));
}

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

}  // namespace carleman::num
