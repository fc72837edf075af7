#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "coe/config.hpp"
#include "coe/errors.hpp"
#include "coe/runner.hpp"

namespace {

int list_presets()
{
  for (const coe::Preset& preset : coe::builtin_scenarios()) {
    std::cout << preset.name << "\t" << preset.config.at("scenario").get<std::string>() << "\t"
              << preset.description << "\n";
  }
  return coe::kExitOk;
}

struct RunArgs
{
  std::string scenario;
  std::string config_path;
  std::string preset;
  std::string out_dir = "coesolve-out";
  std::uint64_t seed = 0;
  bool seed_given = false;
};

int run(const RunArgs& args)
{
  coe::ScenarioConfig config;
  try {
    coe::Json document;
    std::filesystem::path base_dir;
    if (!args.preset.empty()) {
      document = coe::find_preset(args.preset).config;
    } else {
      std::ifstream in(args.config_path);
      if (!in) {
        throw coe::ConfigError("cannot open config file '" + args.config_path + "'");
      }
      try {
        document = coe::Json::parse(in);
      } catch (const coe::Json::parse_error& err) {
        throw coe::ConfigError(args.config_path + ": " + err.what());
      }
      base_dir = std::filesystem::path(args.config_path).parent_path();
    }
    if (args.seed_given) {
      document["seed"] = args.seed;
    }
    config = coe::parse_config(document, base_dir);
    if (coe::to_string(config.scenario) != args.scenario) {
      throw coe::ConfigError("$.scenario: configuration describes '" + coe::to_string(config.scenario) +
                             "' but '" + args.scenario + "' was requested");
    }
  } catch (const std::exception& err) {
    std::cerr << "coesolve: " << err.what() << "\n";
    return coe::kExitConfigError;
  }

  const coe::RunOutcome outcome = coe::run_scenario(config, args.out_dir);
  if (outcome.exit_code != coe::kExitOk) {
    std::cerr << "coesolve: " << outcome.message << "\n";
  } else {
    for (const std::string& file : outcome.outputs) {
      std::cout << (std::filesystem::path(args.out_dir) / file).string() << "\n";
    }
  }
  return outcome.exit_code;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Solver for operator-valued convolution equations"};
  app.set_version_flag("--version", coe::kVersion);
  app.require_subcommand(1);

  app.add_subcommand("presets", "List the built-in scenarios");

  RunArgs args;
  for (const std::string& name : coe::scenario_names()) {
    CLI::App* sub = app.add_subcommand(name, "Run the " + name + " scenario");
    auto* cfg = sub->add_option("--config", args.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    auto* pre = sub->add_option("--preset", args.preset, "Built-in scenario name");
    cfg->excludes(pre);
    sub->add_option("--out", args.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", args.seed, "Override the configuration seed");
  }


  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? coe::kExitOk : coe::kExitConfigError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->get_name() == "presets") {
    return list_presets();
  }
  args.scenario = chosen->get_name();
  args.seed_given = chosen->count("--seed") > 0;
  if (args.config_path.empty() && args.preset.empty()) {
    std::cerr << "coesolve: one of --config or --preset is required\n";
    return coe::kExitConfigError;
  }
  return run(args);
}
