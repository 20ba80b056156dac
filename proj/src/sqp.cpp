#include "robinsqp/sqp.hpp"

#include <cmath>
#include <limits>

namespace robinsqp {

SqpStepResult sqp_step(const Discretization& disc, const Iterate& w, const SqpOptions& opts) {
    LinearizedOperator op(disc, w);
    QpProblem qp = assemble_qp(op);

    SqpStepResult out;
    out.qp = solve_qp(qp, opts.qp_tol, opts.qp_max_outer);

    const StateField zeta = op.state_direction(&out.qp.v, true);
    const StateField eta = op.adjoint_direction(zeta, &out.qp.v, true);

    out.next = w;
    add_scaled(out.next.y, opts.step_size, zeta);
    add_scaled(out.next.phi, opts.step_size, eta);
    add_scaled(out.next.u, opts.step_size, out.qp.v);
    out.next.u = project(out.next.u, disc.spec.lower, disc.spec.upper);
    return out;
}

SqpResult run_sqp(const Discretization& disc, Iterate w, const SqpOptions& opts) {
    std::vector<ConvergenceRecord> history;
    double objective = disc.objective(w.y, w.u);
    history.push_back({0, objective, 0.0, 0.0, 0.0});

    for (int n = 1; n <= opts.max_iters; ++n) {
        SqpStepResult step = sqp_step(disc, w, opts);
        ConvergenceRecord rec;
        rec.n = n;
        rec.delta_u = relative_increment(step.next.u, w.u);
        rec.delta_y = relative_increment(step.next.y, w.y);
        rec.delta_phi = relative_increment(step.next.phi, w.phi);
        rec.objective = disc.objective(step.next.y, step.next.u);
        history.push_back(rec);
        w = std::move(step.next);

        const double prev_objective = objective;
        objective = rec.objective;
        const double scale = std::max(1.0, std::fabs(objective));
        const double ulp = std::nextafter(scale, std::numeric_limits<double>::infinity()) - scale;
        if (rec.delta_u + rec.delta_y + rec.delta_phi < opts.rho ||
            std::fabs(objective - prev_objective) <= 4.0 * ulp)
            return {std::move(w), std::move(history)};
    }
    throw NoConvergence("SQP did not converge in " + std::to_string(opts.max_iters) +
                            " iterations",
                        std::move(history));
}

ContinuationResult run_continuation(const ProblemSpec& spec, int level_min, int level_max,
                                    const SqpOptions& opts) {
    spec.validate();
    if (level_min < 2) throw ValidationError("continuation needs level_min >= 2");
    if (level_max < level_min) throw ValidationError("continuation needs level_max >= level_min");

    ContinuationResult out;
    Mesh prev_mesh;
    Iterate w;
    for (int level = level_min; level <= level_max; ++level) {
        Mesh mesh = build_uniform_mesh(spec.dim, level);
        FemMatrices fem = assemble(mesh);
        Discretization disc(spec, mesh, fem, TimeGrid{spec.T, 1 << level});

        if (level == level_min) {
            BoundaryControlField u0(mesh.boundary_count(), disc.steps());
            u0.values.setConstant(0.5 * (spec.lower + spec.upper));
            w = projected_gradient_init(disc, u0, opts.pg_max_iters, opts.pg_tol);
        } else {
            Iterate fine;
            fine.y = prolong_state(prev_mesh, mesh, w.y);
            fine.phi = prolong_state(prev_mesh, mesh, w.phi);
            fine.u = prolong_control(prev_mesh, mesh, w.u);
            w = std::move(fine);
        }

        try {
            SqpResult res = run_sqp(disc, std::move(w), opts);
            w = std::move(res.iterate);
            out.levels.push_back({level, std::move(res.history)});
        } catch (NoConvergence& e) {
            throw NoConvergence("level " + std::to_string(level) + ": " + e.what(),
                                std::move(e.history));
        }
        prev_mesh = std::move(mesh);
    }
    out.iterate = std::move(w);
    return out;
}

} // namespace robinsqp
