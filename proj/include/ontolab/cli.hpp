#pragma once

// Batch experiment runner: subcommand dispatch, config files, seeded
// reproducibility, JSON/CSV emission. Reruns with the same config and seed
// produce byte-identical JSON bodies apart from the "meta" block.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ontolab/io.hpp"

namespace ontolab {

inline constexpr const char* kToolVersion = "0.1.0";

struct ExperimentConfig {
    std::string subcommand;  // cogwheel | spectrum | conserve | beables | lightcone | bell
    std::map<std::string, std::string> parameters;
    std::uint64_t seed = 0;
    std::string output_format = "json";  // json | csv
    std::string output_path;             // empty = stdout
};

/// Structured-text (JSON) form of the config; unknown keys are rejected.
ExperimentConfig config_from_json(const Json& j);

/// Pure validation: every error is collected (never just the first), each
/// naming the offending key.
std::vector<std::string> validate(const ExperimentConfig& cfg);

struct RunResult {
    int exit_code = 0;  // 0 pass, 1 fail verdict, 2 usage error
    std::string body;
    std::vector<std::string> errors;
};

/// Validates and dispatches; renders the output body without touching files.
RunResult run(const ExperimentConfig& cfg);

/// Command-line entry point: flags, --config merging (flags override file
/// values), output writing, exit-code mapping.
int cli_main(int argc, const char* const* argv);

}  // namespace ontolab
