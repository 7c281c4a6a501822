#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "iclt/cli/config.hpp"

namespace iclt::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFail = 1,
  kExitConfig = 2,     // config, precondition or domain error
  kExitNumerical = 3,  // NumericalFailure
  kExitIo = 4,
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::string status;  // PASS, FAIL or EXPECTED_FAIL
  std::string summary;
  std::vector<std::string> outputs;  // file names relative to the output directory
};

/// Runs one command on a parsed config. Writes the command's artifacts and
/// manifest.json into out_dir; module errors propagate as exceptions.
RunOutcome run(Command c, const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

/// Load, override, validate and run, mapping exceptions to exit codes with the
/// message on err.
int execute(Command c, const std::filesystem::path& config_path, const Overrides& overrides,
            const std::filesystem::path& out_dir, std::ostream& log, std::ostream& err);

const char* tool_version();

}  // namespace iclt::cli
