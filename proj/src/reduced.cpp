#include "robinsqp/reduced.hpp"

#include "robinsqp/errors.hpp"

#include <algorithm>
#include <cmath>

namespace robinsqp {

namespace {

constexpr double armijo_slope = 1e-4;

BoundaryControlField nodal_gradient(const Discretization& disc, const StateField& y,
                                    const StateField& phi, const BoundaryControlField& u) {
    BoundaryControlField g(disc.boundary_nodes(), disc.steps());
    for (int c = 0; c < disc.steps(); ++c)
        for (Eigen::Index r = 0; r < disc.boundary_nodes(); ++r) {
            const int gid = disc.mesh.boundary_nodes[static_cast<std::size_t>(r)];
            g.values(r, c) =
                disc.spec.tikhonov * u.values(r, c) - y.values(gid, c + 1) * phi.values(gid, c);
        }
    return g;
}

} // namespace

ReducedEvaluation evaluate(const Discretization& disc, const BoundaryControlField& u) {
    ReducedEvaluation out;
    out.state = solve_state(disc, u);
    StepSolver solver(disc, out.state, u);
    out.adjoint = solve_adjoint(solver, disc, out.state);
    out.gradient = nodal_gradient(disc, out.state, out.adjoint, u);
    out.objective = disc.objective(out.state, u);
    return out;
}

BoundaryControlField project(const BoundaryControlField& u, double lower, double upper) {
    if (!(lower <= upper)) throw ValidationError("projection bounds are inverted");
    BoundaryControlField out = u;
    out.values = out.values.cwiseMax(lower).cwiseMin(upper);
    return out;
}

Iterate projected_gradient_init(const Discretization& disc, BoundaryControlField u,
                                int max_iters, double tol) {
    const double lo = disc.spec.lower, hi = disc.spec.upper;
    u = project(u, lo, hi);
    ReducedEvaluation cur = evaluate(disc, u);

    double residual = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        BoundaryControlField fixed = u;
        add_scaled(fixed, -1.0, cur.gradient);
        fixed = project(fixed, lo, hi);
        residual = (u.values - fixed.values).lpNorm<Eigen::Infinity>();
        if (residual <= tol) {
            Iterate w;
            w.y = std::move(cur.state);
            w.phi = std::move(cur.adjoint);
            w.u = std::move(u);
            return w;
        }

        double step = 1.0;
        for (int back = 0;; ++back) {
            BoundaryControlField trial = u;
            add_scaled(trial, -step, cur.gradient);
            trial = project(trial, lo, hi);
            ReducedEvaluation eval = evaluate(disc, trial);
            BoundaryControlField diff = trial;
            add_scaled(diff, -1.0, u);
            const double slope = disc.control_dot(cur.gradient, diff);
            if (eval.objective <= cur.objective + armijo_slope * slope) {
                u = std::move(trial);
                cur = std::move(eval);
                break;
            }
            if (back >= 40)
                throw MaxItersExceeded("projected gradient line search", back, eval.objective);
            step *= 0.5;
        }
    }
    throw MaxItersExceeded("projected gradient", max_iters, residual);
}

} // namespace robinsqp
