#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nhs/montecarlo.hpp"
#include "nhs/params.hpp"

namespace nhs {

enum class Overlay { E0Exact, E0HighSnr, E0Evt, TSum };

std::string_view to_string(Overlay o);

struct PowerRange {
  double start = 0.0;  // dBm
  double stop = 50.0;  // dBm, inclusive
  double step = 5.0;   // dB
};

/// A figure-style experiment. List-valued fields (schemes, m_devices, alpha)
/// are swept as a Cartesian product; everything else is shared.
struct ExperimentConfig {
  std::vector<Scheme> schemes{Scheme::WPT, Scheme::BAC};
  std::vector<int> m_devices{1};
  std::vector<double> alpha{0.5};
  SystemParams base;  // alpha and m_devices here are ignored
  PowerRange power_dbm_range;
  double noise_dbm = -94.0;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  Metric metric = Metric::Outage;
  std::vector<Overlay> analytic_overlays;
  std::string output_path;

  /// Powers in dBm from start to stop (inclusive) in `step` increments.
  std::vector<double> powers_dbm() const;
  /// Noise-normalised linear power for a dBm value.
  double power_ratio(double power_dbm) const;
};

struct Violation {
  std::string key;
  std::string value;
  std::string constraint;
  std::string message() const;  // "<key> <constraint> (got <value>)"
};

/// Raised for malformed config text; `key()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Parses flat `key = value` lines ('#' starts a comment). Unknown keys and
/// unparsable values throw ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Serialises a config in the format parse_config reads.
std::string to_config_text(const ExperimentConfig& config);

/// Every broken invariant; empty when the config can be run.
std::vector<Violation> validate(const ExperimentConfig& config);

/// Names accepted by preset().
std::vector<std::string> preset_names();
std::optional<ExperimentConfig> preset(std::string_view name);

/// Header line of every CSV written by run_experiment.
std::string_view csv_columns();

/// Runs every sweep and overlay of `config` and writes CSV rows to `out`.
/// Throws std::invalid_argument on an invalid config.
void run_experiment(const ExperimentConfig& config, std::ostream& out,
                    const EngineOptions& opts = {});

}  // namespace nhs
