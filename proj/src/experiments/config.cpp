#include "carleman/experiments/config.hpp"

#include <algorithm>
#include <cmath>

#include "carleman/error.hpp"

namespace carleman::experiments {

int ExperimentConfig::half_width() const {
  if (M > 0) return M;
  const double top = R_list.empty() ? 8.0 : *std::max_element(R_list.begin(), R_list.end());
  return static_cast<int>(std::ceil(top)) + 4;
}

double ExperimentConfig::tolerance(const std::string& name, double fallback) const {
  const auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

void ExperimentConfig::validate() const {
  if (d < 1 || d > 3) throw Error(ErrorKind::Config, "d must be 1, 2 or 3");
  if (!(A >= 0.0)) throw Error(ErrorKind::Config, "A must be >= 0");
  if (!(L >= 0.0)) throw Error(ErrorKind::Config, "L must be >= 0");
  if (!(c_rule > 0.0)) throw Error(ErrorKind::Config, "c must be positive");
  if (!(mu >= 0.0)) throw Error(ErrorKind::Config, "mu must be >= 0");
  for (std::size_t i = 0; i < R_list.size(); ++i) {
    if (!(R_list[i] > 1.0)) throw Error(ErrorKind::Config, "R_list entries must exceed 1");
    if (i > 0 && !(R_list[i] > R_list[i - 1])) throw Error(ErrorKind::Config, "R_list must be increasing");
    if (!(R_list[i] + 1 < half_width())) throw Error(ErrorKind::Config, "R_list entry needs R + 1 < M");
  }
}

}  // namespace carleman::experiments
