#pragma once

#include "robinsqp/errors.hpp"
#include "robinsqp/qp.hpp"
#include "robinsqp/reduced.hpp"

namespace robinsqp {

struct SqpOptions {
    double rho = 5e-13;    // threshold on delta_u + delta_y + delta_phi
    int max_iters = 30;
    double step_size = 1.0; // exposed for experiments; 1 is the method
    double qp_tol = 0.0;    // 0: 1e-12 * max(1, |q|_inf)
    int qp_max_outer = 50;
    int pg_max_iters = 2000; // coarsest-level warm start
    double pg_tol = 1e-6;
};

struct SqpStepResult {
    Iterate next;
    QpSolution qp;
};

/// One full step: build the quadratic model at w, solve it, advance all
/// three variables by the resulting directions.
SqpStepResult sqp_step(const Discretization& disc, const Iterate& w,
                       const SqpOptions& opts = {});

struct SqpResult {
    Iterate iterate;
    std::vector<ConvergenceRecord> history; // row 0 carries the initial objective
};

/// Iterate sqp_step until the summed relative increments drop below rho or
/// two consecutive objective values agree to machine precision (4 ulp).
/// Throws NoConvergence with the recorded history after max_iters.
SqpResult run_sqp(const Discretization& disc, Iterate w, const SqpOptions& opts = {});

struct LevelRun {
    int level = 0;
    std::vector<ConvergenceRecord> history;
};

struct ContinuationResult {
    Iterate iterate; // on the finest level
    std::vector<LevelRun> levels;
};

/// Mesh continuation: projected-gradient warm start at level_min starting
/// from the bound midpoint, then SQP per level with prolonged iterates.
ContinuationResult run_continuation(const ProblemSpec& spec, int level_min, int level_max,
                                    const SqpOptions& opts = {});

} // namespace robinsqp
