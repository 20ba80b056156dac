#pragma once

#include "robinsqp/errors.hpp"
#include "robinsqp/problem.hpp"
#include "robinsqp/sqp.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace robinsqp {

/// One run of the CLI: problem data, mesh window, stopping rule, output.
/// Defaults are the benchmark values.
struct RunConfig {
    int dim = 2;
    int level_min = 2;
    int level_max = 3;
    double T = 4.0;
    double kappa = 0.3;
    double alpha = 0.1;
    double beta = 100.0;
    std::vector<double> nonlinearity{0.0, -1.0, 0.0, 1.0};
    std::string target = "cospi"; // cospi: initial profile times cos(pi t); zero: 0
    double rho = 5e-13;
    int max_iters = 30;
    std::uint64_t seed = 42;
    std::string output;         // empty: history.csv / diagnostics.txt by mode
    std::string mode = "solve"; // solve | continuation | diagnostics

    bool operator==(const RunConfig&) const = default;
    void validate() const;
};

/// Flat key = value text, # starts a comment. Unknown keys are rejected and
/// the result is validated.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// One "key=value" assignment as given on the command line. Does not
/// validate; callers validate once all overrides are in.
void apply_override(RunConfig& config, const std::string& assignment);

/// Canonical text form; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

ProblemSpec make_spec(const RunConfig& config);
SqpOptions make_options(const RunConfig& config);

/// CSV in the convergence-table layout: header n,objective,delta_u,delta_y,
/// delta_phi; objectives with 17 significant digits, increments with 2; row
/// n = 0 leaves the increment cells empty.
std::string emit_history(const std::vector<ConvergenceRecord>& records);
void write_history(const std::vector<ConvergenceRecord>& records, const std::string& path);

void write_text(const std::string& text, const std::string& path);

/// Output file for the run: the explicit config value or the mode default,
/// placed under ROBINSQP_OUTPUT_DIR when that is set and the path relative
/// (the directory is created if needed).
std::string output_path(const RunConfig& config);

/// Sibling file for one continuation level: history.csv -> history_level3.csv.
std::string level_path(const std::string& path, int level);

} // namespace robinsqp
