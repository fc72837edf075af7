#pragma once

#include <exception>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "coe/config.hpp"

namespace coe {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int
{
  kExitOk = 0,
  kExitConfigError = 2,
  kExitNumericalFailure = 3,
  kExitConditionFailed = 4,
};

/// Exit status for an exception escaping a scenario.
int exit_code_for(const std::exception& err);

struct Preset
{
  std::string name;
  std::string description;
  Json config;
};

const std::vector<Preset>& builtin_scenarios();
/// Throws ConfigError for unknown names.
const Preset& find_preset(std::string_view name);

struct RunOutcome
{
  int exit_code = kExitOk;
  std::string message;
  /// File names relative to the output directory, manifest excluded.
  std::vector<std::string> outputs;
};

/// Runs the scenario, writing its outputs and manifest.json into `out_dir`.
/// Module errors are reported through the exit code and the manifest.
RunOutcome run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir);

} // namespace coe
