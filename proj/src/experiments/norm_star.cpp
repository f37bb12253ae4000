#include "carleman/experiments/norm_star.hpp"

#include <cmath>
#include <vector>

#include "carleman/error.hpp"
#include "carleman/parallel.hpp"

namespace carleman::experiments {

double norm_star(const int* j, int d) noexcept {
  double s = 0.0;
  for (int k = 0; k < d; ++k) {
    const double a = std::abs(j[k]);
    s += a * std::log(a + 1.0);
  }
  return s;
}

namespace {

struct Extremes {
  double sup = -INFINITY, inf = INFINITY;
  std::array<int, 3> argsup{}, arginf{};

  void visit(const std::array<int, 3>& j, int d) {
    double r2 = 0.0;
    for (int k = 0; k < d; ++k) r2 += double(j[k]) * j[k];
    const double r = std::sqrt(r2);
    const double ratio = norm_star(j.data(), d) / (r * std::log(r + 1.0));
    if (ratio > sup) {
      sup = ratio;
      argsup = j;
    }
    if (ratio < inf) {
      inf = ratio;
      arginf = j;
    }
  }

  void merge(const Extremes& o) {
    if (o.sup > sup) {
      sup = o.sup;
      argsup = o.argsup;
    }
    if (o.inf < inf) {
      inf = o.inf;
      arginf = o.arginf;
    }
  }
};

}  // namespace

NormStarResult norm_star_equivalence(int d, int j_max) {
  if (d < 1 || d > 3) throw Error(ErrorKind::InvalidArgument, "norm-star scan supports d <= 3");
  if (j_max < 10) throw Error(ErrorKind::InvalidArgument, "norm-star scan needs j_max >= 10");
  // Both norms are invariant under sign changes and permutations, so
  // j_1 >= j_2 >= ... >= 0 covers every orbit. Rows are merged in order.
  const auto rows = parallel_map<Extremes>(static_cast<std::size_t>(j_max) + 1, [&](std::size_t a) {
    Extremes e;
    const int j1 = static_cast<int>(a);
    if (d == 1) {
      if (j1 > 0) e.visit({j1, 0, 0}, 1);
    } else if (d == 2) {
      for (int j2 = 0; j2 <= j1; ++j2)
        if (j1 > 0) e.visit({j1, j2, 0}, 2);
    } else {
      for (int j2 = 0; j2 <= j1; ++j2)
        for (int j3 = 0; j3 <= j2; ++j3)
          if (j1 > 0) e.visit({j1, j2, j3}, 3);
    }
    return e;
  });
  Extremes all;
  for (const auto& r : rows) all.merge(r);

  NormStarResult res;
  res.d = d;
  res.j_max = j_max;
  res.sup_ratio = all.sup;
  res.inf_ratio = all.inf;
  res.argsup = all.argsup;
  res.arginf = all.arginf;
  res.c_d = std::max(all.sup, 1.0 / all.inf);
  auto& rep = res.report;
  rep.check = "norm_star_equivalence";
  rep.params = {{"d", d}, {"j_max", j_max}};
  rep.defect = d == 1 ? std::max(std::abs(all.sup - 1.0), std::abs(all.inf - 1.0)) : 0.0;
  rep.tolerance = 0.0;
  rep.pass = std::isfinite(res.c_d) && all.inf > 0.0 && (d != 1 || rep.defect == 0.0);
  rep.details = {{"sup_ratio", all.sup}, {"inf_ratio", all.inf}, {"c_d", res.c_d},
                 {"argsup", std::vector<int>(all.argsup.begin(), all.argsup.begin() + d)},
                 {"arginf", std::vector<int>(all.arginf.begin(), all.arginf.begin() + d)}};
  return res;
}

}  // namespace carleman::experiments
