#pragma once

#include "robinsqp/errors.hpp"
#include "robinsqp/qp.hpp"
#include "robinsqp/reduced.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace robinsqp {

/// Aggregated verification results, serialized as flat key = value text so
/// CI jobs can assert on single lines. All entries are finite and, except
/// for the slope, nonnegative.
struct DiagnosticsReport {
    double gradient_fd_error = 0.0;
    double hessian_asymmetry = 0.0;
    double projection_residual = 0.0;
    double complementarity_margin = 0.0;
    double degenerate_fraction = 0.0;
    long above_tau = 0;
    long below_tau = 0;
    double tau = 0.0;
    double convergence_slope = 0.0;
};

std::string emit_report(const DiagnosticsReport& report);

/// Direction with entries drawn from [-1, 1), rescaled to unit sup norm.
/// Raw 64-bit generator words are mapped to doubles directly, so the stream
/// does not depend on the standard library's distribution internals.
BoundaryControlField random_direction(Eigen::Index boundary_nodes, int steps,
                                      std::mt19937_64& rng);

/// Max over n_directions random directions of the best agreement between the
/// assembled directional derivative and central differences of the reduced
/// objective over the step sweep 1e-3..1e-7 (relative to max(1, |exact|)).
/// u must stay strictly inside the bounds under the largest step.
double gradient_check(const Discretization& disc, const BoundaryControlField& u,
                      int n_directions, std::uint64_t seed);

/// Max over n_pairs of |<H v1, v2> - <H v2, v1>| / (1 + |<H v1, v2>|) in the
/// control metric, H applied at w.
double symmetry_check(const Discretization& disc, const Iterate& w, int n_pairs,
                      std::uint64_t seed);

/// Switching-function audit at a converged iterate. d = tikhonov u - y phi
/// on the boundary cylinder decides each bound: d > 0 forces the lower one,
/// d < 0 the upper one, and |d| near zero at an active node means the
/// complementarity there is nearly degenerate.
struct ComplementarityAudit {
    double margin = 0.0;              // min |d| over bound-active nodes
    double degenerate_fraction = 0.0; // bound-active nodes with |d| <= tau, over all nodes
    long above_tau = 0;               // |{d > tau}|
    long below_tau = 0;               // |{d < -tau}|
    double tau = 0.0;
};

/// tau <= 0 picks the default scale 1e-3 * tikhonov * (upper - lower). With
/// no bound-active node the margin is taken over the whole cylinder.
ComplementarityAudit complementarity_audit(const Discretization& disc, const Iterate& w,
                                           double tau = 0.0);

/// |u - clamp(y phi / tikhonov)|_inf, the defect in the projection formula
/// that an exact solution satisfies exactly.
double projection_residual(const Discretization& disc, const Iterate& w);

/// Least-squares slope of log(delta_u at n+1) against log(delta_u at n) over
/// the last (up to) three consecutive pairs, excluding the row on which the
/// stopping rule fired. A slope near 2 is the quadratic-convergence
/// signature.
double convergence_slope(const std::vector<ConvergenceRecord>& history);

} // namespace robinsqp
