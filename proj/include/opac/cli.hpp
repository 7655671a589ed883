#pragma once

#include "opac/checker.hpp"

#include <string>
#include <vector>

namespace opac {

struct RunConfig {
    std::string subcommand = "check";  // check, degree, entropy, ni, validate, export
    std::string model_path;
    std::string property;  // formula text, or a path to a file holding it
    OpacityMode mode = OpacityMode::Semantic;
    int precision = 11;
    std::size_t depth = 10;
    std::size_t state_cap = 1'000'000;
    std::size_t dfa_cap = kDefaultDfaCap;
    std::size_t product_cap = kDefaultProductCap;
    std::size_t expression_cap = kDefaultExpressionCap;
    std::size_t n_max = 64;
    std::size_t tail_window = 16;
    bool json = false;
    bool verbose = false;
    std::vector<std::string> high;
    std::vector<std::string> low;
    std::string format = "json";  // export: json or dot
};

struct RunOutcome {
    int exit_code = 0;
    std::string out;
    std::string err;
};

/// Exit codes: 0 success, 1 property false, 2 input error.
RunOutcome run(const RunConfig& config);

/// Loads the model text, reporting errors as "path:line:col: message".
std::string read_file(const std::string& path);

}  // namespace opac
