#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace carleman {

/// One check outcome: {check, params, defect, tolerance, pass} plus details.
struct CheckReport {
  std::string check;
  nlohmann::json params = nlohmann::json::object();
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  nlohmann::json details = nlohmann::json::object();
};

nlohmann::json to_json(const CheckReport& r);

/// Throws ToleranceExceeded naming the worst trial when the report failed.
void require_pass(const CheckReport& r);

}  // namespace carleman
