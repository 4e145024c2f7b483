#pragma once

#include "sympsturm/applications.hpp"

#include <string>
#include <vector>

namespace sympsturm {

constexpr int kProblemSchema = 1;

struct RunFlags {
    double tol = kDefaultTol;
    int grid = 512;
    std::uint64_t seed = 7;
    int jobs = 1;
    std::string theorem;
    int trials = 10;
    int dim = 0;
    double h = -0.5;
    double e = 0.0;
};

struct CommandResult {
    int exit_code = 0;  // 0 success, 1 verdict failure
    Json json;
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
};

std::vector<std::string> commands();

// Parses and validates a problem file for the command; the result is in
// normal form, so parse(dump(parse(x))) == parse(x). Throws InputError with
// line and column for malformed JSON.
Json parse_problem(const std::string& text, const std::string& command);

// Commands that take no problem file (verify, kepler) accept an empty one.
bool needs_problem(const std::string& command);

CommandResult run_command(const std::string& command, const Json& problem, const RunFlags& flags);

// "json": sorted keys, two-space indent. "csv": fixed columns, 17 significant digits.
std::string emit(const CommandResult& result, const std::string& format);

// Coefficient path from its normal form on [0, T].
MatFn coefficient_path(const Json& j, int rows, double T, const std::string& name);

}  // namespace sympsturm
