#pragma once

#include "robinsqp/pde_solvers.hpp"

#include <cstdint>

namespace robinsqp {

/// Box-constrained quadratic model at an iterate: minimize
/// 1/2 <H v, v> + <q, v> over lower <= v <= upper, inner products and Riesz
/// representatives taken in the lumped boundary metric.
struct QpProblem {
    const LinearizedOperator* op = nullptr;
    BoundaryControlField q;
    BoundaryControlField lower;
    BoundaryControlField upper;
};

/// H v = tikhonov v - y eta_v - zeta_v phi, nodal per interval, where
/// (zeta_v, eta_v) are the homogeneous linearized state/adjoint pair driven
/// by v. One forward and one backward sweep per call.
BoundaryControlField hessian_apply(const LinearizedOperator& op, const BoundaryControlField& v);

/// Build the model at op's iterate: residual-driven sensitivities fold the
/// state/adjoint defects into the linear term, bounds are shifted by u.
QpProblem assemble_qp(const LinearizedOperator& op);

struct QpSolution {
    BoundaryControlField v;
    BoundaryControlField multiplier;          // -(H v + q); zero off the active sets
    Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> active_lower;
    Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> active_upper;
    int outer_iters = 0;
    long inner_iters = 0;
    double kkt_residual = 0.0;
};

/// Primal-dual active set iteration; the inactive block is solved matrix-free
/// by conjugate gradients in the lumped metric. Stops when the active sets
/// repeat and the projected-gradient KKT residual is below tol
/// (default 1e-12 * max(1, |q|_inf) when tol <= 0).
QpSolution solve_qp(const QpProblem& qp, double tol = 0.0, int max_outer = 50);

} // namespace robinsqp
