#include "robinsqp/qp.hpp"

#include "robinsqp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace robinsqp {

namespace {

using Mask = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

BoundaryControlField boundary_pairing(const Discretization& disc, const StateField& a,
                                      const StateField& b) {
    // Interval c: level trace of a at t_{c+1} times the interval value of b.
    BoundaryControlField out(disc.boundary_nodes(), disc.steps());
    for (int c = 0; c < disc.steps(); ++c)
        for (Eigen::Index r = 0; r < disc.boundary_nodes(); ++r) {
            const int g = disc.mesh.boundary_nodes[static_cast<std::size_t>(r)];
            out.values(r, c) = a.values(g, c + 1) * b.values(g, c);
        }
    return out;
}

double weighted_dot(const Discretization& disc, const Eigen::MatrixXd& a,
                    const Eigen::MatrixXd& b) {
    double total = 0.0;
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        double s = 0.0;
        for (Eigen::Index r = 0; r < a.rows(); ++r)
            s += disc.boundary_weights[r] * a(r, c) * b(r, c);
        total += s;
    }
    return disc.grid.tau() * total;
}

} // namespace

BoundaryControlField hessian_apply(const LinearizedOperator& op, const BoundaryControlField& v) {
    const Discretization& disc = op.discretization();
    const StateField zeta = op.state_direction(&v, false);
    const StateField eta = op.adjoint_direction(zeta, &v, false);
    BoundaryControlField out = v;
    out.values *= disc.spec.tikhonov;
    out.values -= boundary_pairing(disc, op.iterate().y, eta).values;
    out.values -= boundary_pairing(disc, zeta, op.iterate().phi).values;
    return out;
}

QpProblem assemble_qp(const LinearizedOperator& op) {
    const Discretization& disc = op.discretization();
    const Iterate& w = op.iterate();
    const StateField zeta0 = op.state_direction(nullptr, true);
    const StateField eta0 = op.adjoint_direction(zeta0, nullptr, true);

    QpProblem qp;
    qp.op = &op;
    qp.q = w.u;
    qp.q.values *= disc.spec.tikhonov;
    qp.q.values -= boundary_pairing(disc, w.y, w.phi).values;
    qp.q.values -= boundary_pairing(disc, w.y, eta0).values;
    qp.q.values -= boundary_pairing(disc, zeta0, w.phi).values;

    qp.lower = w.u;
    qp.lower.values = disc.spec.lower - qp.lower.values.array();
    qp.upper = w.u;
    qp.upper.values = disc.spec.upper - qp.upper.values.array();
    return qp;
}

QpSolution solve_qp(const QpProblem& qp, double tol, int max_outer) {
    const LinearizedOperator& op = *qp.op;
    const Discretization& disc = op.discretization();
    const double kappa = disc.spec.tikhonov;
    const Eigen::MatrixXd& lo = qp.lower.values;
    const Eigen::MatrixXd& hi = qp.upper.values;
    const Eigen::Index nb = lo.rows(), nt = lo.cols();
    if ((lo.array() > hi.array()).any()) throw ValidationError("QP bounds are inverted");
    if (tol <= 0.0) tol = 1e-12 * std::max(1.0, qp.q.values.lpNorm<Eigen::Infinity>());

    // The inner solves stop on the weighted residual, but the termination test
    // below is a sup-norm bound. A node of weight w contributes sqrt(w) of its
    // amplitude to the weighted norm, so the relative inner target alone can
    // leave sup-norm garbage of size residual/sqrt(min w); polish past the
    // level the sup-norm test needs.
    double min_weight = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < nb; ++r)
        min_weight = std::min(min_weight, disc.grid.tau() * disc.boundary_weights[r]);
    const double inner_floor = 0.25 * tol * kappa * std::sqrt(min_weight);

    auto happly = [&](const Eigen::MatrixXd& x) -> Eigen::MatrixXd {
        BoundaryControlField f;
        f.values = x;
        return hessian_apply(op, f).values;
    };

    QpSolution sol;
    Eigen::MatrixXd v = (-qp.q.values / kappa).cwiseMax(lo).cwiseMin(hi);
    // Initial sets from the diagonal model's multiplier, unit penalty.
    Eigen::MatrixXd lambda = -(kappa * v + qp.q.values);
    Mask act_lo(nb, nt), act_hi(nb, nt);
    for (Eigen::Index c = 0; c < nt; ++c)
        for (Eigen::Index r = 0; r < nb; ++r) {
            act_lo(r, c) = v(r, c) + lambda(r, c) < lo(r, c) ? 1 : 0;
            act_hi(r, c) = v(r, c) + lambda(r, c) > hi(r, c) ? 1 : 0;
        }

    auto zero_active = [&](Eigen::MatrixXd& m) {
        for (Eigen::Index c = 0; c < nt; ++c)
            for (Eigen::Index r = 0; r < nb; ++r)
                if (act_lo(r, c) || act_hi(r, c)) m(r, c) = 0.0;
    };

    for (sol.outer_iters = 1; sol.outer_iters <= max_outer; ++sol.outer_iters) {
        Eigen::MatrixXd vb = Eigen::MatrixXd::Zero(nb, nt);
        bool any_active = false;
        for (Eigen::Index c = 0; c < nt; ++c)
            for (Eigen::Index r = 0; r < nb; ++r) {
                if (act_lo(r, c)) vb(r, c) = lo(r, c), any_active = true;
                if (act_hi(r, c)) vb(r, c) = hi(r, c), any_active = true;
            }

        Eigen::MatrixXd rhs = -qp.q.values;
        if (any_active) rhs -= happly(vb);
        zero_active(rhs);

        Eigen::MatrixXd x = v;
        zero_active(x);
        const double rhs_norm = std::sqrt(weighted_dot(disc, rhs, rhs));
        if (rhs_norm == 0.0) {
            x.setZero();
        } else {
            Eigen::MatrixXd ax = happly(x);
            zero_active(ax);
            Eigen::MatrixXd r = rhs - ax;
            Eigen::MatrixXd p = r;
            double rr = weighted_dot(disc, r, r);
            const double target = std::min(1e-12 * rhs_norm, inner_floor);
            const long max_inner = 200 + 4 * static_cast<long>(nb * nt);
            long it = 0;
            while (std::sqrt(rr) > target) {
                if (++it > max_inner)
                    throw MaxItersExceeded("QP inner conjugate gradients", static_cast<int>(it),
                                           std::sqrt(rr));
                Eigen::MatrixXd ap = happly(p);
                zero_active(ap);
                const double curv = weighted_dot(disc, p, ap);
                if (!(curv > 0.0)) throw SecondOrderFailure(curv);
                const double alpha = rr / curv;
                x += alpha * p;
                r -= alpha * ap;
                const double rr_new = weighted_dot(disc, r, r);
                p = r + (rr_new / rr) * p;
                rr = rr_new;
                ++sol.inner_iters;
            }
        }

        v = vb + x;
        const Eigen::MatrixXd grad = happly(v) + qp.q.values;
        lambda = -grad;
        sol.kkt_residual =
            (v - (v - grad / kappa).cwiseMax(lo).cwiseMin(hi)).lpNorm<Eigen::Infinity>();

        bool repeated = true;
        Mask new_lo(nb, nt), new_hi(nb, nt);
        for (Eigen::Index c = 0; c < nt; ++c)
            for (Eigen::Index r = 0; r < nb; ++r) {
                new_lo(r, c) = v(r, c) + lambda(r, c) < lo(r, c) ? 1 : 0;
                new_hi(r, c) = v(r, c) + lambda(r, c) > hi(r, c) ? 1 : 0;
                if (new_lo(r, c) != act_lo(r, c) || new_hi(r, c) != act_hi(r, c))
                    repeated = false;
            }

        if (repeated && sol.kkt_residual <= tol) {
            sol.v.values = v.cwiseMax(lo).cwiseMin(hi);
            sol.active_lower = act_lo;
            sol.active_upper = act_hi;
            sol.multiplier.values = Eigen::MatrixXd::Zero(nb, nt);
            for (Eigen::Index c = 0; c < nt; ++c)
                for (Eigen::Index r = 0; r < nb; ++r)
                    if (act_lo(r, c) || act_hi(r, c)) sol.multiplier.values(r, c) = lambda(r, c);
            return sol;
        }
        act_lo = new_lo;
        act_hi = new_hi;
    }
    throw MaxItersExceeded("QP active set iteration", max_outer, sol.kkt_residual);
}

} // namespace robinsqp
