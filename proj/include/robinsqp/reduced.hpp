#pragma once

#include "robinsqp/pde_solvers.hpp"

namespace robinsqp {

/// Objective, nodal gradient, and the trajectories behind them at a feasible
/// point (y = state of u, phi = its adjoint).
struct ReducedEvaluation {
    double objective = 0.0;
    BoundaryControlField gradient; // tikhonov * u - y phi, nodal per interval
    StateField state;
    StateField adjoint;
};

ReducedEvaluation evaluate(const Discretization& disc, const BoundaryControlField& u);

/// Entrywise clamp to [lower, upper].
BoundaryControlField project(const BoundaryControlField& u, double lower, double upper);

/// Armijo-backtracked projected gradient iteration on the reduced objective,
/// used to pull the coarsest level into the fast-convergence basin. Stops
/// when the projected-gradient fixed-point residual drops below tol.
Iterate projected_gradient_init(const Discretization& disc, BoundaryControlField u,
                                int max_iters, double tol);

} // namespace robinsqp
