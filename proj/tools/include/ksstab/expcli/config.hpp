#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ksstab/model.hpp"

namespace ksstab::expcli {

enum class Experiment {
  FluidFree,
  FluidControlled,
  FlameFree,
  FlameControlled,
  ConvergenceFluid,
  ConvergenceFlame,
  ProjTable,
  SpectrumReport,
};

std::string_view to_string(Experiment experiment);
std::optional<Experiment> parse_experiment(std::string_view name);
const std::vector<std::string_view>& experiment_names();

/// Invalid configuration. `where` names the source of the offending value
/// ("file.cfg:7", "--r", or empty when not attributable).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& message);
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::FluidControlled;
  double nu2 = 1e-6;
  double nu1 = 1e-2;
  double nu0 = 1.0;
  double lambda = 10.0;
  int M = 35;
  double r = 0.2;
  int N = 200;
  double T = 1.5;
  double dt = 1e-4;
  double x_step = 1e-4;
  int sample_every = 100;
  int levels = 4;
  int max_m = 128;
  std::vector<double> fractions{0.1, 0.2, 0.5};
  std::string output_dir;

  ModelParams model() const;
  bool controlled() const noexcept;

  /// Throws ConfigError naming the source recorded for the offending key.
  void validate(const std::map<std::string, std::string>& origins = {}) const;
};

/// Defaults for one experiment: the fluid parameter set, nu0 = 1e-2 for the
/// flame model, and N0 = 50, dt0 = 1e-4, x_step0 = 1e-3, T = 1.5 for
/// convergence studies.
ExperimentConfig default_config(Experiment experiment);

/// Recognised keys, in output order.
const std::vector<std::string_view>& config_keys();

/// Resolves a configuration: experiment defaults, then `key = value` lines
/// from `file` (# starts a comment), then `overrides` in order. Validates the
/// result. An `experiment` key in the file is honoured unless `experiment`
/// is given.
class ConfigBuilder {
 public:
  explicit ConfigBuilder(std::optional<Experiment> experiment = std::nullopt);

  ConfigBuilder& file(const std::filesystem::path& path);
  ConfigBuilder& text(std::string_view contents, const std::string& source = "<config>");
  ConfigBuilder& set(const std::string& key, const std::string& value, const std::string& source);

  ExperimentConfig build() const;

 private:
  struct Entry {
    std::string key;
    std::string value;
    std::string source;
  };
  std::optional<Experiment> experiment_;
  std::vector<Entry> entries_;
};

/// `key = value` lines for every key (17 significant digits), parseable by ConfigBuilder.
std::string format_config(const ExperimentConfig& config);

/// Default output directory: runs/<experiment name>.
std::filesystem::path output_directory(const ExperimentConfig& config);

}  // namespace ksstab::expcli
