#pragma once
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>
#include <json.hpp>
#include "carleman/experiments/config.hpp"

namespace carleman::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Every flag of the command line; the flat JSON config uses the same keys
/// with dashes turned into underscores.
struct RunConfig {
  int d = 1;
  int M = 0;
  double R = 10.0;
  std::vector<double> R_list;
  std::optional<double> alpha;
  double c = 2.0;
  double L = 0.0;
  double A = 1.0;
  double mu = 0.0;
  double beta_max = 2.0;
  int trials = 50;
  std::uint64_t seed = 1;
  double dt = 1e-3;
  double T = 1.0;
  std::string mode;
  std::string normalization = "site_origin";
  std::map<std::string, double> tolerance;

  nlohmann::json to_json() const;
  /// Applies the keys of `j` on top of *this. Throws Config naming the key
  /// for unknown keys and type errors.
  void merge(const nlohmann::json& j);
  experiments::ExperimentConfig experiment() const;
};

/// Defaults of one subcommand before the config file and flags apply.
RunConfig defaults_for(const std::string& subcommand);

/// Reads a flat config object, or the "config" member of a run manifest.
/// Unknown keys and type errors throw Config naming the key.
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

struct RunManifest {
  std::string subcommand;
  RunConfig config;
  std::string version = kToolVersion;
  std::string started;
  std::string finished;
  std::vector<std::string> outputs;  // relative to the run directory
  std::string input_hash;
  nlohmann::json checks = nlohmann::json::array();
  nlohmann::json to_json() const;
};

/// Entry point behind the `carleman` binary. Exit codes: 0 all checks pass,
/// 1 a check failed, 2 usage or config error, 3 numeric failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace carleman::cli
