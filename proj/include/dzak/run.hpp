#pragma once

#include <string>
#include <vector>

#include "dzak/config.hpp"

namespace dzak {

const char* tool_version();

/// Lowercase hex SHA-256 of bytes.
std::string sha256_hex(const std::string& bytes);

struct CheckResult {
  std::string name;
  double value = 0.0;
  std::string bound;  // e.g. "<= 1e-10"
  bool pass = false;
};

struct Artifact {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::size_t bytes = 0;
};

struct RunOutcome {
  int exit_code = 0;
  std::string error;  // message of a module or config error, empty otherwise
  std::vector<CheckResult> checks;
  std::vector<Artifact> artifacts;  // manifest.json itself excluded
  double wall_seconds = 0.0;
};

/// Runs the command of cfg, writes its CSVs (and the snapshot for simulate),
/// effective_config.ini, checks.csv and manifest.json into cfg.out_dir. Exit code 0 when
/// every check passes, base + 9 of the owning range when one fails, and the error's own
/// code when a module throws.
RunOutcome run(const RunConfig& cfg);

}  // namespace dzak
