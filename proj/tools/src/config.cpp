#include "ksstab/expcli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "ksstab/basis.hpp"
#include "ksstab/femgrid.hpp"
#include "ksstab/simulation.hpp"

namespace ksstab::expcli {

namespace {

struct NamedExperiment {
  Experiment experiment;
  std::string_view name;
};

constexpr NamedExperiment kExperiments[] = {
    {Experiment::FluidFree, "fluid-free"},
    {Experiment::FluidControlled, "fluid-controlled"},
    {Experiment::FlameFree, "flame-free"},
    {Experiment::FlameControlled, "flame-controlled"},
    {Experiment::ConvergenceFluid, "convergence-fluid"},
    {Experiment::ConvergenceFlame, "convergence-flame"},
    {Experiment::ProjTable, "proj-table"},
    {Experiment::SpectrumReport, "spectrum"},
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& value, const std::string& key, const std::string& source) {
  double out = 0.0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw ConfigError(source, fmt::format("{} = '{}' is not a finite number", key, value));
  }
  return out;
}

int parse_int(const std::string& value, const std::string& key, const std::string& source) {
  int out = 0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(source, fmt::format("{} = '{}' is not an integer", key, value));
  }
  return out;
}

std::vector<double> parse_list(const std::string& value, const std::string& key, const std::string& source) {
  std::vector<double> out;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) out.push_back(parse_double(trim(item), key, source));
  if (out.empty()) throw ConfigError(source, fmt::format("{} needs at least one value", key));
  return out;
}

void assign(ExperimentConfig& config, const std::string& key, const std::string& value,
            const std::string& source) {
  if (key == "nu2") config.nu2 = parse_double(value, key, source);
  else if (key == "nu1") config.nu1 = parse_double(value, key, source);
  else if (key == "nu0") config.nu0 = parse_double(value, key, source);
  else if (key == "lambda") config.lambda = parse_double(value, key, source);
  else if (key == "M") config.M = parse_int(value, key, source);
  else if (key == "r") config.r = parse_double(value, key, source);
  else if (key == "N") config.N = parse_int(value, key, source);
  else if (key == "T") config.T = parse_double(value, key, source);
  else if (key == "dt") config.dt = parse_double(value, key, source);
  else if (key == "x_step") config.x_step = parse_double(value, key, source);
  else if (key == "sample_every") config.sample_every = parse_int(value, key, source);
  else if (key == "levels") config.levels = parse_int(value, key, source);
  else if (key == "max_m") config.max_m = parse_int(value, key, source);
  else if (key == "fractions") config.fractions = parse_list(value, key, source);
  else if (key == "output_dir") config.output_dir = value;
  else throw ConfigError(source, fmt::format("unknown key '{}'", key));
}

std::string origin(const std::map<std::string, std::string>& origins, const std::string& key) {
  const auto it = origins.find(key);
  return it == origins.end() ? std::string("default") : it->second;
}

bool is_convergence(Experiment e) {
  return e == Experiment::ConvergenceFluid || e == Experiment::ConvergenceFlame;
}

}  // namespace

std::string_view to_string(Experiment experiment) {
  for (const auto& e : kExperiments) {
    if (e.experiment == experiment) return e.name;
  }
  return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (const auto& e : kExperiments) {
    if (e.name == name) return e.experiment;
  }
  return std::nullopt;
}

const std::vector<std::string_view>& experiment_names() {
  static const std::vector<std::string_view> names = [] {
    std::vector<std::string_view> out;
    for (const auto& e : kExperiments) out.push_back(e.name);
    return out;
  }();
  return names;
}

ConfigError::ConfigError(const std::string& where, const std::string& message)
    : std::runtime_error(where.empty() ? message : where + ": " + message), where_(where) {}

ModelParams ExperimentConfig::model() const {
  const bool flame = experiment == Experiment::FlameFree || experiment == Experiment::FlameControlled ||
                     experiment == Experiment::ConvergenceFlame;
  return ModelParams{flame ? ModelKind::Flame : ModelKind::Fluid, nu2, nu1, nu0,
                     is_convergence(experiment) ? ForcingKind::Manufactured : ForcingKind::Zero};
}

bool ExperimentConfig::controlled() const noexcept {
  return experiment == Experiment::FluidControlled || experiment == Experiment::FlameControlled;
}

void ExperimentConfig::validate(const std::map<std::string, std::string>& origins) const {
  auto fail = [&](const std::string& key, const std::string& message) {
    throw ConfigError(origin(origins, key), message);
  };
  if (!(nu2 > 0.0)) fail("nu2", fmt::format("nu2 must be > 0 (got {})", nu2));
  if (!(lambda > 0.0)) fail("lambda", fmt::format("lambda must be > 0 (got {})", lambda));
  if (M < 1) fail("M", fmt::format("M must be >= 1 (got {})", M));
  if (!(r > 0.0 && r < 1.0)) fail("r", fmt::format("r must lie in (0, 1) (got {})", r));
  if (N < 1) fail("N", fmt::format("N must be >= 1 (got {})", N));
  if (!(T > 0.0)) fail("T", fmt::format("T must be > 0 (got {})", T));
  if (!(dt > 0.0)) fail("dt", fmt::format("dt must be > 0 (got {})", dt));
  if (sample_every < 1) fail("sample_every", fmt::format("sample_every must be >= 1 (got {})", sample_every));
  if (levels < 1 || levels > 6) fail("levels", fmt::format("levels must lie in [1, 6] (got {})", levels));
  if (max_m < 1) fail("max_m", fmt::format("max_m must be >= 1 (got {})", max_m));
  for (double f : fractions) {
    if (!(f > 0.0 && f < 1.0)) fail("fractions", fmt::format("every fraction must lie in (0, 1) (got {})", f));
  }

  const bool time_stepping = experiment != Experiment::ProjTable && experiment != Experiment::SpectrumReport;
  if (!time_stepping) {
    if (experiment == Experiment::SpectrumReport) {
      try {
        count_unstable_modes(model(), SpectralBasis(BoundaryKind::Periodic, 1.0, N));
      } catch (const std::domain_error&) {
        fail("N", fmt::format("N = {} does not reach the stable part of the spectrum", N));
      }
    }
    return;
  }
  try {
    step_count(T, dt);
  } catch (const std::invalid_argument&) {
    fail("dt", fmt::format("T = {} is not an integer multiple of dt = {}", T, dt));
  }
  int nodes = 0;
  try {
    nodes = Grid(x_step).size();
  } catch (const std::invalid_argument&) {
    fail("x_step", fmt::format("1 / x_step must be an integer >= 3 (x_step = {})", x_step));
  }
  const int finest_modes = is_convergence(experiment) ? N << (levels - 1) : N;
  const int finest_nodes = is_convergence(experiment) ? nodes << (levels - 1) : nodes;
  if (finest_modes + 1 >= finest_nodes) {
    fail("x_step", fmt::format("grid with {} nodes cannot resolve {} modes", finest_nodes, finest_modes));
  }
  if (is_convergence(experiment) && N < 7) fail("N", "the exact solution needs N >= 7");
  if (controlled() && M > N) fail("M", fmt::format("M = {} actuators need N >= M modes (N = {})", M, N));
}

ExperimentConfig default_config(Experiment experiment) {
  ExperimentConfig config;
  config.experiment = experiment;
  switch (experiment) {
    case Experiment::FlameFree:
    case Experiment::FlameControlled:
      config.nu0 = 1e-2;
      break;
    case Experiment::ConvergenceFlame:
      config.nu0 = 1e-2;
      [[fallthrough]];
    case Experiment::ConvergenceFluid:
      config.N = 50;
      config.dt = 1e-4;
      config.x_step = 1e-3;
      config.T = 1.5;
      break;
    default:
      break;
  }
  return config;
}

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys{"nu2", "nu1",          "nu0",    "lambda", "M",
                                                  "r",   "N",            "T",      "dt",     "x_step",
                                                  "sample_every", "levels", "max_m", "fractions", "output_dir"};
  return keys;
}

ConfigBuilder::ConfigBuilder(std::optional<Experiment> experiment) : experiment_(experiment) {}

ConfigBuilder& ConfigBuilder::file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return text(buffer.str(), path.string());
}

ConfigBuilder& ConfigBuilder::text(std::string_view contents, const std::string& source) {
  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start <= contents.size()) {
    const auto end = std::min(contents.find('\n', start), contents.size());
    std::string_view line = contents.substr(start, end - start);
    ++line_number;
    start = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const std::string where = fmt::format("{}:{}", source, line_number);
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) throw ConfigError(where, fmt::format("expected 'key = value', got '{}'", trimmed));
    set(trim(std::string_view(trimmed).substr(0, eq)), trim(std::string_view(trimmed).substr(eq + 1)), where);
  }
  return *this;
}

ConfigBuilder& ConfigBuilder::set(const std::string& key, const std::string& value, const std::string& source) {
  if (key.empty()) throw ConfigError(source, "empty key");
  entries_.push_back({key, value, source});
  return *this;
}

ExperimentConfig ConfigBuilder::build() const {
  std::optional<Experiment> experiment = experiment_;
  std::string experiment_source = "--experiment";
  if (!experiment) {
    for (const auto& e : entries_) {
      if (e.key != "experiment") continue;
      experiment = parse_experiment(e.value);
      experiment_source = e.source;
      if (!experiment) throw ConfigError(e.source, fmt::format("unknown experiment '{}'", e.value));
    }
  }
  if (!experiment) throw ConfigError("", "no experiment selected");

  ExperimentConfig config = default_config(*experiment);
  std::map<std::string, std::string> origins;
  for (const auto& e : entries_) {
    if (e.key == "experiment") {
      const auto named = parse_experiment(e.value);
      if (!named) throw ConfigError(e.source, fmt::format("unknown experiment '{}'", e.value));
      continue;
    }
    assign(config, e.key, e.value, e.source);
    origins[e.key] = e.source;
  }
  config.validate(origins);
  return config;
}

std::string format_config(const ExperimentConfig& c) {
  std::string fractions;
  for (std::size_t k = 0; k < c.fractions.size(); ++k) {
    fractions += fmt::format("{}{:.17g}", k == 0 ? "" : ",", c.fractions[k]);
  }
  std::string out;
  out += fmt::format("experiment = {}\n", to_string(c.experiment));
  out += fmt::format("nu2 = {:.17g}\nnu1 = {:.17g}\nnu0 = {:.17g}\nlambda = {:.17g}\n", c.nu2, c.nu1, c.nu0, c.lambda);
  out += fmt::format("M = {}\nr = {:.17g}\nN = {}\n", c.M, c.r, c.N);
  out += fmt::format("T = {:.17g}\ndt = {:.17g}\nx_step = {:.17g}\n", c.T, c.dt, c.x_step);
  out += fmt::format("sample_every = {}\nlevels = {}\nmax_m = {}\nfractions = {}\n", c.sample_every, c.levels,
                     c.max_m, fractions);
  if (!c.output_dir.empty()) out += fmt::format("output_dir = {}\n", c.output_dir);
  return out;
}

std::filesystem::path output_directory(const ExperimentConfig& config) {
  if (!config.output_dir.empty()) return config.output_dir;
  return std::filesystem::path("runs") / std::string(to_string(config.experiment));
}

}  // namespace ksstab::expcli
