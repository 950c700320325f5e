#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ksstab/expcli/config.hpp"
#include "ksstab/expcli/experiments.hpp"
#include "ksstab/expcli/summary.hpp"

namespace ex = ksstab::expcli;

namespace {

int run_command(const std::string& experiment, const std::string& config_file,
                const std::map<std::string, std::string>& overrides) {
  std::optional<ex::Experiment> selected;
  if (!experiment.empty()) {
    selected = ex::parse_experiment(experiment);
    if (!selected) {
      std::string names;
      for (auto name : ex::experiment_names()) names += fmt::format(" {}", name);
      throw ex::ConfigError("--experiment", fmt::format("unknown experiment '{}'; choose one of:{}", experiment, names));
    }
  }
  ex::ConfigBuilder builder(selected);
  if (!config_file.empty()) builder.file(config_file);
  for (const auto& [key, value] : overrides) builder.set(key, value, "--" + key);
  const ex::ExperimentConfig config = builder.build();

  const ex::RunResult result = ex::run_experiment(config);
  fmt::print("{} {} -> {}\n", ex::to_string(config.experiment), result.manifest.get("status").value_or("?"),
             (result.directory / "manifest.txt").string());
  for (const auto& [key, value] : result.manifest.with_prefix("summary.")) fmt::print("  {} = {}\n", key, value);
  for (const auto& [key, value] : result.manifest.with_prefix("check.")) fmt::print("  check {} = {}\n", key, value);
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feedback stabilization of Kuramoto-Sivashinsky type equations"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one experiment and write its outputs");
  std::string experiment;
  std::string config_file;
  std::map<std::string, std::string> overrides;
  std::map<std::string, std::string> flag_values;
  run->add_option("--experiment,-e", experiment, "experiment name");
  run->add_option("--config,-c", config_file, "key = value configuration file")->check(CLI::ExistingFile);
  for (auto key : ex::config_keys()) {
    const std::string name(key);
    std::string flags = "--" + name;
    if (name.find('_') != std::string::npos) {
      std::string dashed = name;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      flags += ",--" + dashed;
    }
    run->add_option(flags, flag_values[name], "override " + name);
  }

  auto* proj = app.add_subcommand("proj-table", "print the projection-norm table as CSV");
  int max_m = 128;
  std::vector<double> fractions{0.1, 0.2, 0.5};
  std::string proj_output;
  proj->add_option("--max-m", max_m, "largest actuator count")->check(CLI::PositiveNumber);
  proj->add_option("--r", fractions, "comma separated covering fractions")->delimiter(',');
  proj->add_option("--output,-o", proj_output, "write to a file instead of stdout");

  auto* summarize = app.add_subcommand("summarize", "tabulate manifests and flag failed checks");
  bool strict = false;
  std::vector<std::string> manifests;
  summarize->add_flag("--strict", strict, "exit 4 on any blow-up or failed check");
  summarize->add_option("manifests", manifests, "manifest files or run directories");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ex::kExitConfig;
  }

  try {
    if (*run) {
      for (auto key : ex::config_keys()) {
        const std::string name(key);
        if (run->count("--" + name) > 0) overrides[name] = flag_values[name];
      }
      return run_command(experiment, config_file, overrides);
    }
    if (*proj) {
      for (double r : fractions) {
        if (!(r > 0.0 && r < 1.0)) throw ex::ConfigError("--r", fmt::format("r must lie in (0, 1) (got {})", r));
      }
      const std::string csv = ex::projection_csv(ex::projection_table(max_m, fractions));
      if (proj_output.empty()) {
        std::cout << csv;
      } else {
        ex::write_atomic(proj_output, csv);
      }
      return ex::kExitOk;
    }
    if (*summarize) {
      std::vector<std::filesystem::path> paths(manifests.begin(), manifests.end());
      ex::SummaryReport report;
      try {
        report = ex::summarize(paths);
      } catch (const std::runtime_error& e) {
        fmt::print(stderr, "input error: {}\n", e.what());
        return ex::kExitConfig;
      }
      std::cout << report.text;
      return strict && report.has_violations ? ex::kExitViolation : ex::kExitOk;
    }
  } catch (const ex::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return ex::kExitConfig;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return ex::kExitOk;
}
