#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ksstab::expcli {

/// Ordered `key = value` record of one run. Keys are unique; set() on an
/// existing key replaces the value in place.
class Manifest {
 public:
  void set(std::string key, std::string value);
  std::optional<std::string> get(std::string_view key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

  /// Entries whose key starts with `prefix`, with the prefix stripped.
  std::vector<std::pair<std::string, std::string>> with_prefix(std::string_view prefix) const;

  std::string str() const;

  /// Throws std::runtime_error on malformed lines, naming source and line.
  static Manifest parse(std::string_view text, const std::string& source);
  static Manifest load(const std::filesystem::path& path);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

/// Shortest exact decimal form is not needed; data files use 17 significant digits.
std::string format_number(double value);

}  // namespace ksstab::expcli
