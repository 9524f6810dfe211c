#pragma once

#include <string>
#include <vector>

#include "run_config.hpp"

namespace wgqed::cli {

struct RunResult {
    int exit_code = 0;
    std::vector<std::string> files;
    std::vector<std::string> warnings;
};

// Runs one command and writes its files under cfg.output.dir. Throws
// ConfigError for invalid input and wgqed::Error for numerical failures;
// an oracle check that fails its tolerances returns exit_code 4.
RunResult run_command(const RunConfig& cfg);

}  // namespace wgqed::cli
