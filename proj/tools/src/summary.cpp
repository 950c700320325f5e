#include "ksstab/expcli/summary.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace ksstab::expcli {

namespace {

// Summary scalars shown per experiment; anything else stays in the manifest.
std::vector<std::string> key_scalars(const std::string& experiment) {
  if (experiment == "fluid-controlled" || experiment == "flame-controlled") {
    return {"distance_ratio", "decay_rate", "final_distance", "unstable_modes"};
  }
  if (experiment == "fluid-free" || experiment == "flame-free") {
    return {"final_distance", "min_distance_ratio", "mean_drift"};
  }
  if (experiment == "convergence-fluid" || experiment == "convergence-flame") {
    return {"ratio_1", "ratio_2", "ratio_3", "ratio_4", "ratio_5"};
  }
  if (experiment == "proj-table") return {"rows", "max_closed_form_gap", "min_margin_over_limit"};
  if (experiment == "spectrum") return {"unstable_modes", "sigma_31", "sigma_32"};
  return {};
}

std::string shorten(const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size() && value.find('.') != std::string::npos) return fmt::format("{:.6g}", v);
  } catch (const std::exception&) {
  }
  return value;
}

SummaryRow make_row(const std::string& source, const Manifest& manifest) {
  const auto experiment = manifest.get("experiment");
  const auto status = manifest.get("status");
  if (!experiment || !status) {
    throw std::runtime_error(fmt::format("{}: manifest lacks 'experiment' or 'status'", source));
  }
  SummaryRow row{source, *experiment, "ok", "", {}};
  for (const auto& key : key_scalars(*experiment)) {
    if (const auto value = manifest.get("summary." + key)) {
      row.scalars += fmt::format("{}{}={}", row.scalars.empty() ? "" : " ", key, shorten(*value));
    }
  }
  for (const auto& [name, verdict] : manifest.with_prefix("check.")) {
    if (verdict == "fail") {
      row.failed_checks.push_back(name);
    } else if (verdict != "pass") {
      throw std::runtime_error(fmt::format("{}: check.{} has verdict '{}'", source, name, verdict));
    }
  }
  if (*status != "ok") {
    row.status = "FAILED";
    if (const auto time = manifest.get("blow_up.time")) row.scalars = fmt::format("blow-up at t={}", shorten(*time));
  } else if (!row.failed_checks.empty()) {
    row.status = "VIOLATION";
  }
  return row;
}

}  // namespace

SummaryReport summarize(const std::vector<std::pair<std::string, Manifest>>& manifests) {
  SummaryReport report;
  for (const auto& [source, manifest] : manifests) report.rows.push_back(make_row(source, manifest));

  std::size_t w_exp = std::string_view("experiment").size();
  std::size_t w_status = std::string_view("status").size();
  for (const auto& row : report.rows) {
    w_exp = std::max(w_exp, row.experiment.size());
    w_status = std::max(w_status, row.status.size());
  }
  report.text = fmt::format("{:<{}}  {:<{}}  {}\n", "experiment", w_exp, "status", w_status, "key scalars");
  for (const auto& row : report.rows) {
    report.text += fmt::format("{:<{}}  {:<{}}  {}", row.experiment, w_exp, row.status, w_status, row.scalars);
    if (!row.failed_checks.empty()) report.text += fmt::format("  [failed: {}]", fmt::join(row.failed_checks, ", "));
    report.text += fmt::format("  ({})\n", row.source);
    report.has_violations = report.has_violations || row.status != "ok";
  }
  return report;
}

SummaryReport summarize(const std::vector<std::filesystem::path>& manifests) {
  std::vector<std::pair<std::string, Manifest>> loaded;
  for (const auto& path : manifests) {
    const auto file = std::filesystem::is_directory(path) ? path / "manifest.txt" : path;
    loaded.emplace_back(path.string(), Manifest::load(file));
  }
  return summarize(loaded);
}

}  // namespace ksstab::expcli
