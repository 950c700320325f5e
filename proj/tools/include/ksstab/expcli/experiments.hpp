#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ksstab/expcli/config.hpp"
#include "ksstab/expcli/manifest.hpp"

namespace ksstab::expcli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBlowUp = 3;
inline constexpr int kExitViolation = 4;

struct RunResult {
  Manifest manifest;
  std::filesystem::path directory;
  int exit_code = kExitOk;
};

/// Runs one experiment and writes its data files plus `manifest.txt` and
/// `config.txt` into output_directory(config). A solver blow-up is not an
/// exception: it is recorded in the manifest and gives exit code 3.
RunResult run_experiment(const ExperimentConfig& config);

struct ProjectionRow {
  int M;
  double r;
  double min_eig_numeric;
  double min_eig_closed;
  double norm;
  double theta_inf;
  double offdiag_ratio;  ///< max |Theta_ij|, i != j, over max |Theta_ii|
  double condition;      ///< Gram matrix condition number
  bool certified;
};

/// One row per (M, r) with M = 1..max_m, r in fractions (r varies fastest within M).
std::vector<ProjectionRow> projection_table(int max_m, const std::vector<double>& fractions);

/// CSV with header M,r,min_eig_numeric,min_eig_closed,norm,theta_inf.
std::string projection_csv(const std::vector<ProjectionRow>& rows);

/// Initial states of the stabilization experiments.
double target_initial(double x);
double tracked_initial(double x);

}  // namespace ksstab::expcli
