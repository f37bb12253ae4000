#include "carleman/report.hpp"

#include "carleman/error.hpp"

namespace carleman {

nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json j;
  j["check"] = r.check;
  j["params"] = r.params;
  j["defect"] = r.defect;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  if (!r.details.empty()) j["details"] = r.details;
  return j;
}

void require_pass(const CheckReport& r) {
  if (r.pass) return;
  std::string msg = r.check + " defect " + std::to_string(r.defect) + " above " + std::to_string(r.tolerance);
  if (r.details.contains("worst_trial_seed"))
    msg += " (trial seed " + std::to_string(r.details["worst_trial_seed"].get<std::uint64_t>()) + ")";
  throw Error(ErrorKind::ToleranceExceeded, msg);
}

}  // namespace carleman
