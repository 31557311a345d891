#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinchain/experiments.hpp"

namespace spinchain {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Validated contents of a JSON run configuration. Unset fields fall back to
/// the preset of the command being run.
struct RunConfig {
  nlohmann::json scenario = nlohmann::json::object();  // field overrides, already checked
  std::size_t trace_samples = 401;
  std::optional<Grid> rabi_grid;
  std::optional<Grid> xi_grid;
  std::optional<std::vector<double>> f_values;
  std::optional<std::vector<double>> b0_values;
  std::optional<double> scan_min;
  std::optional<double> scan_max;
  std::size_t scan_steps = 81;
  std::optional<std::string> scan_initial;
  std::optional<std::string> scan_target;
  IntegratorOptions integrator;
  std::string convention = "auto";
  std::optional<std::string> out_dir;
  std::optional<unsigned> jobs;

  /// Throws ConfigError on unknown keys or values of the wrong type/range.
  static RunConfig from_json(const nlohmann::json& doc);
  static RunConfig load(const std::filesystem::path& path);

  Scenario scenario_from(Scenario preset) const;
  RunOptions run_options() const;
};

/// Full command-line entry point; returns the process exit code
/// (0 success, 2 configuration or usage error, 3 numerical failure).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spinchain
