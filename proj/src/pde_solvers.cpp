#include "robinsqp/pde_solvers.hpp"

#include "robinsqp/errors.hpp"
#include "robinsqp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>

namespace robinsqp {

namespace {

constexpr double newton_target = 2e-14;
constexpr double newton_accept = 1e-12;
constexpr double step_solve_tol = 1e-12;

// Diagonal of the step matrix on top of base: reaction slope plus the lumped
// boundary term for the interval control.
Eigen::VectorXd step_diagonal(const Discretization& disc, const Eigen::VectorXd& yk,
                              const Eigen::VectorXd& u_col) {
    Eigen::VectorXd d = disc.fem.lumped_mass.cwiseProduct(disc.reaction_d1(yk));
    for (Eigen::Index r = 0; r < disc.boundary_nodes(); ++r)
        d[disc.mesh.boundary_nodes[static_cast<std::size_t>(r)]] +=
            disc.boundary_weights[r] * u_col[r];
    return d;
}

Eigen::VectorXd boundary_diag(const Discretization& disc, const Eigen::VectorXd& u_col) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(disc.nodes());
    for (Eigen::Index r = 0; r < disc.boundary_nodes(); ++r)
        d[disc.mesh.boundary_nodes[static_cast<std::size_t>(r)]] =
            disc.boundary_weights[r] * u_col[r];
    return d;
}

std::size_t factor_budget_bytes() {
    if (const char* env = std::getenv("ROBINSQP_FACTOR_CACHE_BYTES")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return std::size_t(1500) * 1000 * 1000;
}

} // namespace

StepSolver::StepSolver(const Discretization& disc, const StateField& y,
                       const BoundaryControlField& u)
    : disc_(disc) {
    const int nt = disc.steps();
    const Eigen::Index n = disc.nodes();
    step_diag_.resize(n, nt);
    for (int k = 1; k <= nt; ++k)
        step_diag_.col(k - 1) = step_diagonal(disc, y.values.col(k), u.values.col(k - 1));

    work_ = disc.base;

    auto first = std::make_unique<Factor>();
    load_matrix(1, work_);
    first->analyzePattern(work_);
    first->factorize(work_);
    if (first->info() != Eigen::Success)
        throw LinearSolveFailure(1, std::numeric_limits<double>::infinity());

    const std::size_t per_factor =
        static_cast<std::size_t>(first->matrixL().nestedExpression().nonZeros()) * 16 +
        static_cast<std::size_t>(n) * 32;
    if (per_factor * static_cast<std::size_t>(nt) <= factor_budget_bytes()) {
        cache_.resize(static_cast<std::size_t>(nt));
        cache_[0] = std::move(first);
        for (int k = 2; k <= nt; ++k) {
            load_matrix(k, work_);
            auto f = std::make_unique<Factor>();
            f->analyzePattern(work_);
            f->factorize(work_);
            if (f->info() != Eigen::Success)
                throw LinearSolveFailure(k, std::numeric_limits<double>::infinity());
            cache_[static_cast<std::size_t>(k - 1)] = std::move(f);
        }
    } else {
        lazy_ = std::move(first);
        lazy_step_ = 1;
    }
}

void StepSolver::load_matrix(int k, Eigen::SparseMatrix<double>& into) const {
    std::copy(disc_.base.valuePtr(), disc_.base.valuePtr() + disc_.base.nonZeros(),
              into.valuePtr());
    const auto* col = step_diag_.col(k - 1).data();
    for (Eigen::Index i = 0; i < disc_.nodes(); ++i)
        into.valuePtr()[disc_.diagonal[static_cast<std::size_t>(i)]] += col[i];
}

const StepSolver::Factor& StepSolver::factor(int k) const {
    if (!cache_.empty()) return *cache_[static_cast<std::size_t>(k - 1)];
    if (lazy_step_ != k) {
        load_matrix(k, work_);
        lazy_->factorize(work_);
        if (lazy_->info() != Eigen::Success)
            throw LinearSolveFailure(k, std::numeric_limits<double>::infinity());
        lazy_step_ = k;
    }
    return *lazy_;
}

Eigen::VectorXd StepSolver::apply(int k, const Eigen::VectorXd& x) const {
    return disc_.base * x + step_diag_.col(k - 1).cwiseProduct(x);
}

Eigen::VectorXd StepSolver::solve(int k, const Eigen::VectorXd& rhs) const {
    const Factor& f = factor(k);
    Eigen::VectorXd x = f.solve(rhs);
    const double tol = step_solve_tol * std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
    double res = 0.0;
    for (int refine = 0; refine < 3; ++refine) {
        Eigen::VectorXd r = rhs - apply(k, x);
        res = r.lpNorm<Eigen::Infinity>();
        if (res <= tol) return x;
        x += f.solve(r);
    }
    Eigen::VectorXd r = rhs - apply(k, x);
    res = r.lpNorm<Eigen::Infinity>();
    if (res > tol) throw LinearSolveFailure(k, res);
    return x;
}

StateField solve_state(const Discretization& disc, const BoundaryControlField& u) {
    const int nt = disc.steps();
    const Eigen::Index n = disc.nodes();
    if (u.boundary_nodes() != disc.boundary_nodes() || u.steps() != nt)
        throw ValidationError("control field does not match the discretization");
    if (u.values.minCoeff() < 0.0)
        throw ValidationError("Robin coefficient must be nonnegative");

    StateField y(n, nt);
    y.values.col(0) = disc.y0_nodal;

    Eigen::SparseMatrix<double> jac = disc.base;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.analyzePattern(jac);

    const double tau = disc.grid.tau();
    for (int k = 1; k <= nt; ++k) {
        const Eigen::VectorXd bdiag = boundary_diag(disc, u.values.col(k - 1));
        const Eigen::VectorXd drift =
            disc.fem.mass * y.values.col(k - 1) / tau + disc.boundary_loads.col(k - 1);
        auto residual = [&](const Eigen::VectorXd& yk) -> Eigen::VectorXd {
            return disc.base * yk + disc.fem.lumped_mass.cwiseProduct(disc.reaction(yk)) +
                   bdiag.cwiseProduct(yk) - drift;
        };

        Eigen::VectorXd yk = y.values.col(k - 1);
        Eigen::VectorXd res = residual(yk);
        double rnorm = res.lpNorm<Eigen::Infinity>();
        for (int it = 0; it < 30 && rnorm > newton_target; ++it) {
            std::copy(disc.base.valuePtr(), disc.base.valuePtr() + disc.base.nonZeros(),
                      jac.valuePtr());
            const Eigen::VectorXd jd =
                disc.fem.lumped_mass.cwiseProduct(disc.reaction_d1(yk)) + bdiag;
            for (Eigen::Index i = 0; i < n; ++i)
                jac.valuePtr()[disc.diagonal[static_cast<std::size_t>(i)]] += jd[i];
            solver.factorize(jac);
            if (solver.info() != Eigen::Success)
                throw NewtonDivergence(k, rnorm);
            const Eigen::VectorXd dy = solver.solve(-res);

            double s = 1.0;
            Eigen::VectorXd trial = yk + dy;
            Eigen::VectorXd tres = residual(trial);
            double tnorm = tres.lpNorm<Eigen::Infinity>();
            for (int halve = 0; halve < 10 && tnorm > rnorm; ++halve) {
                s *= 0.5;
                trial = yk + s * dy;
                tres = residual(trial);
                tnorm = tres.lpNorm<Eigen::Infinity>();
            }
            yk = trial;
            res = tres;
            rnorm = tnorm;
        }
        if (!(rnorm <= newton_accept)) throw NewtonDivergence(k, rnorm);
        y.values.col(k) = yk;
    }
    return y;
}

StateField solve_adjoint(const StepSolver& solver, const Discretization& disc,
                         const StateField& y) {
    const int nt = disc.steps();
    StateField phi(disc.nodes(), nt);
    phi.values.col(nt) =
        disc.spec.terminal_weight * (y.values.col(nt) - disc.terminal_nodal);
    const double tau = disc.grid.tau();
    for (int c = nt - 1; c >= 0; --c) {
        Eigen::VectorXd rhs = disc.fem.mass * phi.values.col(c + 1) / tau;
        if (disc.spec.tracking_weight != 0.0)
            rhs += disc.spec.tracking_weight *
                   (disc.fem.mass * (y.values.col(c + 1) - disc.target_nodal.col(c + 1)));
        phi.values.col(c) = solver.solve(c + 1, rhs);
    }
    return phi;
}

StateField solve_adjoint(const Discretization& disc, const StateField& y,
                         const BoundaryControlField& u) {
    StepSolver solver(disc, y, u);
    return solve_adjoint(solver, disc, y);
}

Eigen::VectorXd state_residual(const Discretization& disc, const StateField& y,
                               const BoundaryControlField& u, int k) {
    const Eigen::VectorXd bdiag = boundary_diag(disc, u.values.col(k - 1));
    return disc.base * y.values.col(k) +
           disc.fem.lumped_mass.cwiseProduct(disc.reaction(y.values.col(k))) +
           bdiag.cwiseProduct(y.values.col(k)) -
           disc.fem.mass * y.values.col(k - 1) / disc.grid.tau() -
           disc.boundary_loads.col(k - 1);
}

Eigen::VectorXd adjoint_residual(const Discretization& disc, const StateField& y,
                                 const StateField& phi, const BoundaryControlField& u, int k) {
    const Eigen::VectorXd bdiag = boundary_diag(disc, u.values.col(k - 1));
    const Eigen::VectorXd& pk = phi.values.col(k - 1);
    Eigen::VectorXd r =
        disc.base * pk +
        disc.fem.lumped_mass.cwiseProduct(disc.reaction_d1(y.values.col(k))).cwiseProduct(pk) +
        bdiag.cwiseProduct(pk) - disc.fem.mass * phi.values.col(k) / disc.grid.tau();
    if (disc.spec.tracking_weight != 0.0)
        r -= disc.spec.tracking_weight *
             (disc.fem.mass * (y.values.col(k) - disc.target_nodal.col(k)));
    return r;
}

namespace {
const Iterate& validated(const Discretization& disc, const Iterate& w) {
    if (w.y.nodes() != disc.nodes() || w.y.steps() != disc.steps() ||
        w.u.boundary_nodes() != disc.boundary_nodes() || w.u.steps() != disc.steps() ||
        w.phi.nodes() != disc.nodes() || w.phi.steps() != disc.steps())
        throw ValidationError("iterate does not match the discretization");
    return w;
}
} // namespace

LinearizedOperator::LinearizedOperator(const Discretization& disc, const Iterate& w)
    : disc_(disc), w_(&validated(disc, w)), solver_(disc, w.y, w.u) {}

StateField LinearizedOperator::state_direction(const BoundaryControlField* v,
                                               bool include_residual) const {
    const int nt = disc_.steps();
    const double tau = disc_.grid.tau();
    StateField z(disc_.nodes(), nt);
    if (include_residual) z.values.col(0) = disc_.y0_nodal - w_->y.values.col(0);
    for (int k = 1; k <= nt; ++k) {
        Eigen::VectorXd rhs = disc_.fem.mass * z.values.col(k - 1) / tau;
        if (v)
            for (Eigen::Index r = 0; r < disc_.boundary_nodes(); ++r) {
                const int g = disc_.mesh.boundary_nodes[static_cast<std::size_t>(r)];
                rhs[g] -= disc_.boundary_weights[r] * v->values(r, k - 1) * w_->y.values(g, k);
            }
        if (include_residual) rhs -= state_residual(disc_, w_->y, w_->u, k);
        z.values.col(k) = solver_.solve(k, rhs);
    }
    ++forward_solves_;
    return z;
}

StateField LinearizedOperator::adjoint_direction(const StateField& zeta,
                                                 const BoundaryControlField* v,
                                                 bool include_residual) const {
    const int nt = disc_.steps();
    const double tau = disc_.grid.tau();
    const double wl = disc_.spec.terminal_weight;
    StateField eta(disc_.nodes(), nt);
    eta.values.col(nt) = wl * zeta.values.col(nt);
    if (include_residual)
        eta.values.col(nt) -=
            w_->phi.values.col(nt) - wl * (w_->y.values.col(nt) - disc_.terminal_nodal);
    for (int c = nt - 1; c >= 0; --c) {
        const int k = c + 1;
        Eigen::VectorXd rhs = disc_.fem.mass * eta.values.col(c + 1) / tau;
        if (disc_.spec.tracking_weight != 0.0)
            rhs += disc_.spec.tracking_weight * (disc_.fem.mass * zeta.values.col(k));
        rhs -= disc_.fem.lumped_mass.cwiseProduct(disc_.reaction_d2(w_->y.values.col(k)))
                   .cwiseProduct(w_->phi.values.col(c))
                   .cwiseProduct(zeta.values.col(k));
        if (v)
            for (Eigen::Index r = 0; r < disc_.boundary_nodes(); ++r) {
                const int g = disc_.mesh.boundary_nodes[static_cast<std::size_t>(r)];
                rhs[g] -= disc_.boundary_weights[r] * v->values(r, c) * w_->phi.values(g, c);
            }
        if (include_residual) rhs -= adjoint_residual(disc_, w_->y, w_->phi, w_->u, k);
        eta.values.col(c) = solver_.solve(k, rhs);
    }
    ++backward_solves_;
    return eta;
}

void dump_state(const StateField& y, std::ostream& out) {
    out << "nodes " << y.nodes() << " levels " << y.steps() + 1 << "\n";
    for (int k = 0; k <= y.steps(); ++k) {
        out << "level " << k;
        for (Eigen::Index i = 0; i < y.nodes(); ++i) out << ' ' << y.values(i, k);
        out << '\n';
    }
}

} // namespace robinsqp
