#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "em1d/nonlinear.hpp"

namespace em1d {

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

/// Writes to a temporary sibling and renames it over the target.
void write_atomic(const std::filesystem::path& path, std::string_view content);

struct OutputFile {
  std::string name;  ///< relative to the output directory
  std::string sha256;
  std::uint64_t bytes = 0;
};

/// Collects outputs of one command and writes them atomically.
class OutputDir {
 public:
  /// The directory must exist.
  explicit OutputDir(std::filesystem::path dir);

  const std::filesystem::path& path() const { return dir_; }
  void write(const std::string& name, std::string_view content);
  const std::vector<OutputFile>& files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<OutputFile> files_;
};

struct RunManifest {
  std::string command;
  std::string config;  ///< canonical config text
  std::string version;
  std::uint64_t seed = 0;
  std::string started, finished;  ///< UTC, ISO 8601
  std::vector<OutputFile> files;
  bool assertions_enabled = false;
  std::vector<std::string> failures;

  std::string to_json() const;
};

std::string utc_timestamp();

/// Per-field CSV (x, value) plus a JSON manifest with the grid, config hash
/// and time. Files are named snapshot_<index>_<field>.csv.
void write_snapshot(OutputDir& out, const PhysState& s, int index, const std::string& config_hash);
void write_snapshot(OutputDir& out, const PhysState& s, const std::string& label, const std::string& config_hash);

}  // namespace em1d
