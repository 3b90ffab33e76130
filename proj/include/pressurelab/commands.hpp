#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pressurelab/config.hpp"
#include "pressurelab/report.hpp"

namespace pressurelab {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides the config seed
  unsigned threads = 1;
  bool svg = false;
  bool write_files = true;
};

struct RunResult {
  nlohmann::json report;
  Trace trace;
  int exit_code = 0;  // 0 pass, 2 verification failure
  std::vector<std::filesystem::path> files;
};

/// (command, subcommand) pairs accepted by run().
const std::vector<std::pair<std::string, std::string>>& known_commands();

/// Executes one command and, unless disabled, writes <out>/<command>-<sub>.json plus
/// a CSV (and SVG on request) when the command produces a trace.
RunResult run(const std::string& command, const std::string& subcommand, const ExperimentConfig& config,
              const RunOptions& options = {});

/// Machine-readable error description for exit code 1.
nlohmann::json error_record(const std::exception& e);

/// Report with the wall-time field removed, for determinism comparisons.
nlohmann::json without_wall_time(nlohmann::json report);

}  // namespace pressurelab
