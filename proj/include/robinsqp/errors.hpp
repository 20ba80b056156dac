#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace robinsqp {

/// Invalid problem data or configuration (bad bounds, dimensions, ...).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed config text; carries line number and offending key where known.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, int line_no, std::string key_)
        : std::runtime_error(what + " (line " + std::to_string(line_no) + ")"),
          line(line_no), key(std::move(key_)) {}
    int line;
    std::string key;
};

/// File or stream I/O failure.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Per-time-step Newton iteration failed to reach its residual target.
struct NewtonDivergence : std::runtime_error {
    NewtonDivergence(int step_, double residual_)
        : std::runtime_error("state Newton diverged at step " + std::to_string(step_) +
                             ", residual " + std::to_string(residual_)),
          step(step_), residual(residual_) {}
    int step;
    double residual;
};

/// A factorized step solve (with refinement) could not meet its residual bound.
struct LinearSolveFailure : std::runtime_error {
    LinearSolveFailure(int step_, double residual_)
        : std::runtime_error("step solve residual " + std::to_string(residual_) +
                             " at step " + std::to_string(step_)),
          step(step_), residual(residual_) {}
    int step;
    double residual;
};

/// Fixed-point iteration exhausted its iteration budget.
struct MaxItersExceeded : std::runtime_error {
    MaxItersExceeded(const std::string& where, int iters_, double residual_)
        : std::runtime_error(where + ": no convergence after " + std::to_string(iters_) +
                             " iterations, residual " + std::to_string(residual_)),
          iters(iters_), residual(residual_) {}
    int iters;
    double residual;
};

/// Conjugate gradients met nonpositive curvature: the quadratic model is not
/// convex on the current inactive set.
struct SecondOrderFailure : std::runtime_error {
    explicit SecondOrderFailure(double curvature_)
        : std::runtime_error("nonpositive curvature " + std::to_string(curvature_) +
                             " in QP inner solve"),
          curvature(curvature_) {}
    double curvature;
};

struct ConvergenceRecord {
    int n = 0;
    double objective = 0.0;
    double delta_u = 0.0;
    double delta_y = 0.0;
    double delta_phi = 0.0;
};

/// SQP ran out of iterations; carries everything recorded so far.
struct NoConvergence : std::runtime_error {
    NoConvergence(const std::string& what, std::vector<ConvergenceRecord> history_)
        : std::runtime_error(what), history(std::move(history_)) {}
    std::vector<ConvergenceRecord> history;
};

} // namespace robinsqp
