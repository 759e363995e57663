#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "em1d/config.hpp"
#include "em1d/io.hpp"

namespace em1d {

/// One configured assertion. `value` is the measured quantity, `limit` the
/// bound it was held to.
struct Assertion {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double limit = 0.0;
};

struct CommandReport {
  RunManifest manifest;
  std::vector<Assertion> assertions;
  bool ok() const { return manifest.failures.empty(); }
};

std::vector<std::string> command_names();
/// Keys accepted by a command; throws ConfigError for an unknown command.
const Schema& command_schema(const std::string& command);

/// Validates `cfg` against the command schema, runs it into `out`
/// (which must exist) and writes manifest.json last. Failed assertions are
/// listed in the manifest and in failures.json. Numerical failures
/// propagate after any diagnostic state has been written.
CommandReport run_command(const std::string& command, const Config& cfg, const std::filesystem::path& out,
                          bool assertions);

/// Version string recorded in manifests.
const char* version_string();

}  // namespace em1d
