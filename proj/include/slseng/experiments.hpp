#pragma once

#include <string>

#include "slseng/config.hpp"

namespace slseng {

struct RunResult {
    int exit_code = 0;
    std::string csv_path;
    std::string summary;
};

// Execute one named experiment: evaluates the grid, writes the CSV artifact
// atomically and returns the exit code (0 ok, 2 when any quadrature/series
// failure flag was raised, 1 on configuration or validation failure).
RunResult run_experiment(const LoadedConfig& config);

}  // namespace slseng
