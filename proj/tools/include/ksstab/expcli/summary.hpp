#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ksstab/expcli/manifest.hpp"

namespace ksstab::expcli {

struct SummaryRow {
  std::string source;
  std::string experiment;
  std::string status;  ///< "ok", "FAILED" (blow-up) or "VIOLATION"
  std::string scalars;
  std::vector<std::string> failed_checks;
};

struct SummaryReport {
  std::vector<SummaryRow> rows;
  std::string text;
  bool has_violations = false;  ///< any blow-up or failed check
};

/// Throws std::runtime_error for a missing or corrupt manifest.
SummaryReport summarize(const std::vector<std::filesystem::path>& manifests);
SummaryReport summarize(const std::vector<std::pair<std::string, Manifest>>& manifests);

}  // namespace ksstab::expcli
