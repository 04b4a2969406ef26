// Command-line runner: `nhs run --preset fig1a`, `nhs validate --config x.cfg`.
#include <CLI11.hpp>
#include <fmt/core.h>

#include <fstream>
#include <iostream>
#include <optional>

#include "nhs/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

int report_violations(const std::vector<nhs::Violation>& v) {
  for (const auto& item : v) fmt::print(stderr, "config error: {}\n", item.message());
  return v.empty() ? kOk : kConfigError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NOMA outage and rate experiments for WPT and backscatter uplinks"};
  app.require_subcommand(1);

  std::string preset_name, config_path, out_path;
  std::optional<std::uint64_t> trials, seed;

  auto* run = app.add_subcommand("run", "run a preset or config file and write CSV");
  auto* source = run->add_option_group("source");
  source->add_option("--preset", preset_name, "figure preset")
      ->check(CLI::IsMember(nhs::preset_names()));
  source->add_option("--config", config_path, "key = value config file");
  source->require_option(1);
  run->add_option("--trials", trials, "override trials per point");
  run->add_option("--seed", seed, "override the base seed");
  run->add_option("--out", out_path, "CSV path ('-' for stdout)");

  auto* check = app.add_subcommand("validate", "check a config file and list violations");
  check->add_option("--config", config_path, "key = value config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  nhs::ExperimentConfig config;
  try {
    if (!preset_name.empty()) {
      config = *nhs::preset(preset_name);
    } else {
      config = nhs::load_config(config_path);
    }
  } catch (const nhs::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kConfigError;
  }

  if (*check) {
    const int rc = report_violations(nhs::validate(config));
    if (rc == kOk) fmt::print("ok\n");
    return rc;
  }

  if (trials) config.trials = *trials;
  if (seed) config.seed = *seed;
  if (!out_path.empty()) config.output_path = out_path;
  if (config.output_path.empty()) {
    config.output_path = preset_name.empty() ? "-" : preset_name + ".csv";
  }
  if (const int rc = report_violations(nhs::validate(config)); rc != kOk) return rc;

  try {
    if (config.output_path == "-") {
      nhs::run_experiment(config, std::cout);
    } else {
      std::ofstream file(config.output_path);
      if (!file) {
        fmt::print(stderr, "error: cannot write {}\n", config.output_path);
        return kRuntimeError;
      }
      nhs::run_experiment(config, file);
      file.close();
      if (!file) {
        fmt::print(stderr, "error: failed writing {}\n", config.output_path);
        return kRuntimeError;
      }
      fmt::print(stderr, "wrote {}\n", config.output_path);
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kRuntimeError;
  }
  return kOk;
}
