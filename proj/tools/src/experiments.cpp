#include "ksstab/expcli/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "ksstab/basis.hpp"
#include "ksstab/diagnostics.hpp"
#include "ksstab/feedback.hpp"
#include "ksstab/femgrid.hpp"
#include "ksstab/galerkin.hpp"
#include "ksstab/manufactured.hpp"
#include "ksstab/oblique.hpp"
#include "ksstab/simulation.hpp"

namespace ksstab::expcli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxSnapshotTimes = 400;
constexpr std::size_t kMaxSnapshotPoints = 1000;

std::string utc_now() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(
                                                  std::chrono::system_clock::now())));
}

std::string num(double v) { return format_number(v); }

std::string pass_fail(bool ok) { return ok ? "pass" : "fail"; }

std::size_t stride_for(std::size_t count, std::size_t limit) { return (count + limit - 1) / limit; }

/// Collects output files and summary entries for one run.
class RunRecorder {
 public:
  RunRecorder(const ExperimentConfig& config, Manifest& manifest)
      : directory_(output_directory(config)), manifest_(manifest) {}

  const std::filesystem::path& directory() const { return directory_; }

  void write(const std::string& name, const std::string& contents) {
    write_atomic(directory_ / name, contents);
    outputs_.push_back(name);
  }
  void summary(const std::string& key, const std::string& value) { manifest_.set("summary." + key, value); }
  void summary(const std::string& key, double value) { summary(key, num(value)); }
  void check(const std::string& name, bool ok) { manifest_.set("check." + name, pass_fail(ok)); }

  std::string outputs() const {
    std::string out;
    for (std::size_t k = 0; k < outputs_.size(); ++k) out += (k == 0 ? "" : ",") + outputs_[k];
    return out;
  }

 private:
  std::filesystem::path directory_;
  Manifest& manifest_;
  std::vector<std::string> outputs_;
};

std::string trajectory_csv(const std::vector<SampleDiagnostics>& diagnostics) {
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out), "t,mean,target_mean,l2_distance,v_distance,max_abs_u\n");
  for (const auto& d : diagnostics) {
    fmt::format_to(std::back_inserter(out), "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", d.time, d.mean,
                   d.target_mean, d.l2_distance, d.v_distance, d.max_control);
  }
  return fmt::to_string(out);
}

std::string controls_csv(const Trajectory& trajectory, int actuators) {
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out), "t");
  for (int j = 1; j <= actuators; ++j) fmt::format_to(std::back_inserter(out), ",u_{}", j);
  fmt::format_to(std::back_inserter(out), "\n");
  for (const auto& s : trajectory.samples) {
    fmt::format_to(std::back_inserter(out), "{:.17g}", s.time);
    for (Eigen::Index j = 0; j < s.controls.size(); ++j) fmt::format_to(std::back_inserter(out), ",{:.17g}", s.controls(j));
    fmt::format_to(std::back_inserter(out), "\n");
  }
  return fmt::to_string(out);
}

/// Decimated (t, x, target, tracked[, free]) samples of the fields on the grid.
std::string snapshots_csv(const GalerkinSpace& space, const Trajectory& trajectory, const Trajectory* uncontrolled_run) {
  const auto& samples = trajectory.samples;
  const std::size_t t_stride = stride_for(samples.size(), kMaxSnapshotTimes);
  const std::size_t x_stride = stride_for(static_cast<std::size_t>(space.nodes()), kMaxSnapshotPoints);
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out), "t,x,target,tracked{}\n", uncontrolled_run != nullptr ? ",uncontrolled" : "");
  for (std::size_t k = 0; k < samples.size(); k += t_stride) {
    const Eigen::VectorXd target = space.evaluate(samples[k].target);
    const Eigen::VectorXd tracked = space.evaluate(samples[k].tracked);
    Eigen::VectorXd uncontrolled;
    if (uncontrolled_run != nullptr) uncontrolled = space.evaluate(uncontrolled_run->samples[k].tracked);
    for (std::size_t n = 0; n < static_cast<std::size_t>(space.nodes()); n += x_stride) {
      const auto i = static_cast<Eigen::Index>(n);
      fmt::format_to(std::back_inserter(out), "{:.17g},{:.17g},{:.17g},{:.17g}", samples[k].time,
                     space.grid().node(static_cast<int>(n)), target(i), tracked(i));
      if (uncontrolled_run != nullptr) fmt::format_to(std::back_inserter(out), ",{:.17g}", uncontrolled(i));
      fmt::format_to(std::back_inserter(out), "\n");
    }
  }
  return fmt::to_string(out);
}

/// Maxima of four consecutive blocks of the distance series decrease strictly.
bool monotone_trend(const std::vector<SampleDiagnostics>& d) {
  constexpr std::size_t kBlocks = 4;
  if (d.size() < kBlocks) return false;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < kBlocks; ++b) {
    const std::size_t begin = b * d.size() / kBlocks;
    const std::size_t end = (b + 1) * d.size() / kBlocks;
    double block_max = 0.0;
    for (std::size_t k = begin; k < end; ++k) block_max = std::max(block_max, d[k].l2_distance);
    if (!(block_max < previous)) return false;
    previous = block_max;
  }
  return true;
}

double min_distance(const std::vector<SampleDiagnostics>& d) {
  double out = std::numeric_limits<double>::infinity();
  for (const auto& s : d) out = std::min(out, s.l2_distance);
  return out;
}

struct Setup {
  SpectralBasis basis;
  Grid grid;
  GalerkinSpace space;
  Eigen::VectorXd target0;
  Eigen::VectorXd tracked0;

  explicit Setup(const ExperimentConfig& config)
      : basis(BoundaryKind::Periodic, 1.0, config.N), grid(config.x_step), space(basis, grid) {
    target0 = space.project(grid.sample(target_initial));
    tracked0 = space.project(grid.sample(tracked_initial));
  }
};

void record_mean_checks(RunRecorder& rec, const ExperimentConfig& config, const std::vector<SampleDiagnostics>& d) {
  double drift = 0.0;
  bool nonincreasing = true;
  for (std::size_t k = 0; k < d.size(); ++k) {
    drift = std::max({drift, std::abs(d[k].mean - d.front().mean), std::abs(d[k].target_mean - d.front().target_mean)});
    if (k > 0 && (d[k].mean > d[k - 1].mean || d[k].target_mean > d[k - 1].target_mean)) nonincreasing = false;
  }
  rec.summary("mean_drift", drift);
  rec.summary("mean_nonincreasing", nonincreasing ? "true" : "false");
  if (config.model().kind == ModelKind::Fluid) {
    rec.check("mean_conserved", drift <= 1e-8);
  } else {
    rec.check("mean_nonincreasing", nonincreasing);
  }
}

void run_free(const ExperimentConfig& config, RunRecorder& rec) {
  const ModelParams params = config.model();
  const Setup setup(config);
  const Trajectory trajectory = run(params, setup.space, nullptr, setup.target0, setup.tracked0,
                                    RunOptions{config.T, config.dt, config.sample_every});
  const auto d = diagnose(trajectory, setup.basis, params);
  rec.write("trajectory.csv", trajectory_csv(d));
  rec.write("snapshots.csv", snapshots_csv(setup.space, trajectory, nullptr));

  const double initial = d.front().l2_distance;
  rec.summary("initial_distance", initial);
  rec.summary("final_distance", d.back().l2_distance);
  rec.summary("min_distance_ratio", min_distance(d) / initial);
  rec.summary("final_mean", d.back().mean);
  record_mean_checks(rec, config, d);
  rec.check("free_not_stabilized", min_distance(d) >= 1e-1 * initial);
}

void run_controlled(const ExperimentConfig& config, RunRecorder& rec) {
  const ModelParams params = config.model();
  const Setup setup(config);
  const FeedbackLaw feedback(params, setup.basis, make_feedback_config(config.lambda, config.M, config.r));
  const PairedTrajectory paired = run_paired(params, setup.space, feedback, setup.target0, setup.tracked0,
                                             RunOptions{config.T, config.dt, config.sample_every});
  const auto controlled = diagnose(paired.controlled, setup.basis, params);
  const auto uncontrolled = diagnose(paired.free, setup.basis, params);
  rec.write("trajectory.csv", trajectory_csv(controlled));
  rec.write("free_trajectory.csv", trajectory_csv(uncontrolled));
  rec.write("controls.csv", controls_csv(paired.controlled, config.M));
  rec.write("snapshots.csv", snapshots_csv(setup.space, paired.controlled, &paired.free));

  const double initial = controlled.front().l2_distance;
  const double ratio = controlled.back().l2_distance / initial;
  const DecayFit fit = fit_decay(controlled);
  double max_control = 0.0;
  for (const auto& s : controlled) max_control = std::max(max_control, s.max_control);
  rec.summary("initial_distance", initial);
  rec.summary("final_distance", controlled.back().l2_distance);
  rec.summary("distance_ratio", ratio);
  rec.summary("decay_rate", fit.rate);
  rec.summary("decay_amplitude", fit.amplitude);
  rec.summary("decay_samples", std::to_string(fit.samples));
  rec.summary("max_abs_u", max_control);
  rec.summary("free_final_distance", uncontrolled.back().l2_distance);
  rec.summary("free_min_distance_ratio", min_distance(uncontrolled) / initial);
  rec.summary("unstable_modes", std::to_string(count_unstable_modes(params, setup.basis)));
  rec.check("distance_ratio", ratio <= 1e-2);
  rec.check("decay_rate_positive", fit.rate > 0.0);
  rec.check("monotone_trend", monotone_trend(controlled));
  rec.check("free_not_stabilized", min_distance(uncontrolled) >= 1e-1 * initial);
}

void run_convergence(const ExperimentConfig& config, RunRecorder& rec) {
  const ModelParams params = config.model();
  ConvergenceOptions options;
  options.base_modes = config.N;
  options.base_dt = config.dt;
  options.base_x_step = config.x_step;
  options.final_time = config.T;
  options.levels = config.levels;
  options.parallel = true;
  const auto levels = convergence_study(params, options);

  fmt::memory_buffer table;
  fmt::memory_buffer curves;
  fmt::format_to(std::back_inserter(table), "rho,modes,dt,x_step,max_error,ratio,order\n");
  fmt::format_to(std::back_inserter(curves), "rho,t,error\n");
  bool ratios_ok = true;
  for (const auto& level : levels) {
    const double order = std::log2(level.ratio);
    fmt::format_to(std::back_inserter(table), "{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", level.level,
                   level.modes, level.dt, level.x_step, level.max_error, level.ratio, order);
    for (std::size_t k = 0; k < level.times.size(); ++k) {
      fmt::format_to(std::back_inserter(curves), "{},{:.17g},{:.17g}\n", level.level, level.times[k], level.errors[k]);
    }
    rec.summary(fmt::format("max_error_{}", level.level), level.max_error);
    if (level.level > 0) {
      rec.summary(fmt::format("ratio_{}", level.level), level.ratio);
      rec.summary(fmt::format("order_{}", level.level), order);
      ratios_ok = ratios_ok && level.ratio >= 3.0 && level.ratio <= 5.0;
    }
  }
  rec.write("convergence.csv", fmt::to_string(table));
  rec.write("convergence_curves.csv", fmt::to_string(curves));
  if (levels.size() > 1) rec.check("ratios_in_range", ratios_ok);
}

void run_proj_table(const ExperimentConfig& config, RunRecorder& rec) {
  const auto rows = projection_table(config.max_m, config.fractions);
  rec.write("proj_table.csv", projection_csv(rows));

  double offdiag = 0.0;
  double gap = 0.0;
  double margin = std::numeric_limits<double>::infinity();
  bool certified = true;
  for (const auto& row : rows) {
    offdiag = std::max(offdiag, row.offdiag_ratio);
    gap = std::max(gap, std::abs(row.min_eig_numeric - row.min_eig_closed));
    margin = std::min(margin, row.min_eig_numeric - row.theta_inf);
    certified = certified && row.certified;
  }
  // Centre sums of every frequency below the actuator count, up to 2 max_m actuators.
  double center_sum = 0.0;
  for (int m_count = 2; m_count <= 2 * config.max_m; ++m_count) {
    for (int m = 1; m < m_count; ++m) {
      center_sum = std::max({center_sum, std::abs(center_cos_sum(m, m_count)), std::abs(center_sin_sum(m, m_count))});
    }
  }
  rec.summary("rows", std::to_string(rows.size()));
  rec.summary("max_offdiag_ratio", offdiag);
  rec.summary("max_closed_form_gap", gap);
  rec.summary("min_margin_over_limit", margin);
  rec.summary("max_center_sum", center_sum);
  rec.check("theta_diagonal", offdiag <= 1e-10);
  rec.check("closed_form", gap <= 1e-10);
  rec.check("above_limit", margin > 0.0);
  rec.check("gram_certified", certified);
  rec.check("center_sums", center_sum <= 1e-10);
}

void run_spectrum(const ExperimentConfig& config, RunRecorder& rec) {
  const ModelParams params = config.model();
  const SpectralBasis basis(BoundaryKind::Periodic, 1.0, config.N);
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out), "i,mu,sigma\n");
  for (int i = 1; i <= config.N; ++i) {
    fmt::format_to(std::back_inserter(out), "{},{:.17g},{:.17g}\n", i, basis.laplacian_eigenvalue(i),
                   ks_growth_rate(params, basis, i));
  }
  rec.write("spectrum.csv", fmt::to_string(out));
  const int unstable = count_unstable_modes(params, basis);
  rec.summary("unstable_modes", std::to_string(unstable));
  for (int i = 30; i <= std::min(config.N, 33); ++i) {
    rec.summary(fmt::format("sigma_{}", i), ks_growth_rate(params, basis, i));
  }
  // Reference values exist only for the default coefficients.
  if (config.nu2 == 1e-6 && config.nu1 == 1e-2 && config.N >= 33) {
    bool sigma_ok = true;
    for (int i : {30, 31}) sigma_ok = sigma_ok && std::abs(ks_growth_rate(params, basis, i) - 9.9251) <= 1e-3;
    for (int i : {32, 33}) sigma_ok = sigma_ok && std::abs(ks_growth_rate(params, basis, i) + 1.0761) <= 1e-3;
    rec.check("unstable_modes", unstable == 31);
    rec.check("sigma_values", sigma_ok);
  }
}

}  // namespace

double target_initial(double x) { return 1.0 + std::abs(std::sin(4.0 * kPi * x)); }

double tracked_initial(double x) { return std::cos(2.0 * kPi * x) * (1.0 + std::sin(2.0 * kPi * x)); }

std::vector<ProjectionRow> projection_table(int max_m, const std::vector<double>& fractions) {
  if (max_m < 1) throw std::invalid_argument("max_m must be >= 1");
  std::vector<ProjectionRow> rows;
  rows.reserve(static_cast<std::size_t>(max_m) * fractions.size());
  for (int m = 1; m <= max_m; ++m) {
    const SpectralBasis basis(BoundaryKind::Periodic, 1.0, m);
    for (double r : fractions) {
      const ObliqueProjector projector(basis, build_actuators(m, r, 1.0));
      const Eigen::MatrixXd theta = theta_matrix(projector);
      const double diag_max = theta.diagonal().cwiseAbs().maxCoeff();
      const Eigen::MatrixXd off = theta - Eigen::MatrixXd(theta.diagonal().asDiagonal());
      const auto cert = certify_direct_sum(projector);
      const double numeric = min_theta_eigenvalue_numeric(projector);
      rows.push_back({m, r, numeric, min_theta_closed_form(m, r), 1.0 / std::sqrt(numeric), theta_infinity(r),
                      off.cwiseAbs().maxCoeff() / diag_max, cert.condition, cert.ok});
    }
  }
  return rows;
}

std::string projection_csv(const std::vector<ProjectionRow>& rows) {
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out), "M,r,min_eig_numeric,min_eig_closed,norm,theta_inf\n");
  for (const auto& row : rows) {
    fmt::format_to(std::back_inserter(out), "{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", row.M, row.r,
                   row.min_eig_numeric, row.min_eig_closed, row.norm, row.theta_inf);
  }
  return fmt::to_string(out);
}

RunResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  RunResult result;
  Manifest& manifest = result.manifest;
  manifest.set("experiment", std::string(to_string(config.experiment)));
  {
    const Manifest resolved = Manifest::parse(format_config(config), "config");
    for (const auto& [key, value] : resolved.entries()) {
      if (key != "experiment") manifest.set("config." + key, value);
    }
  }
  manifest.set("started", utc_now());

  RunRecorder rec(config, manifest);
  result.directory = rec.directory();
  std::filesystem::create_directories(result.directory);
  rec.write("config.txt", format_config(config));
  try {
    switch (config.experiment) {
      case Experiment::FluidFree:
      case Experiment::FlameFree:
        run_free(config, rec);
        break;
      case Experiment::FluidControlled:
      case Experiment::FlameControlled:
        run_controlled(config, rec);
        break;
      case Experiment::ConvergenceFluid:
      case Experiment::ConvergenceFlame:
        run_convergence(config, rec);
        break;
      case Experiment::ProjTable:
        run_proj_table(config, rec);
        break;
      case Experiment::SpectrumReport:
        run_spectrum(config, rec);
        break;
    }
    manifest.set("status", "ok");
  } catch (const BlowUpError& e) {
    manifest.set("status", "blow-up");
    manifest.set("blow_up.step", std::to_string(e.step()));
    manifest.set("blow_up.time", num(e.time()));
    result.exit_code = kExitBlowUp;
  }
  manifest.set("finished", utc_now());
  manifest.set("exit_code", std::to_string(result.exit_code));
  manifest.set("outputs", rec.outputs());
  write_atomic(result.directory / "manifest.txt", manifest.str());
  return result;
}

}  // namespace ksstab::expcli
