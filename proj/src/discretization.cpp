#include "robinsqp/discretization.hpp"

#include "robinsqp/errors.hpp"
#include "robinsqp/parallel.hpp"

#include <array>

namespace robinsqp {

namespace {

Eigen::VectorXd interpolate(const Mesh& mesh, const SpatialFn& f) {
    Eigen::VectorXd out(mesh.node_count());
    par::for_each(mesh.node_count(), [&](std::int64_t i) {
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int d = 0; d < mesh.dim; ++d) x[static_cast<std::size_t>(d)] = mesh.nodes(i, d);
        out[i] = f(std::span<const double>(x.data(), static_cast<std::size_t>(mesh.dim)));
    });
    return out;
}

Eigen::VectorXd interpolate(const Mesh& mesh, const SpaceTimeFn& f, double t) {
    Eigen::VectorXd out(mesh.node_count());
    par::for_each(mesh.node_count(), [&](std::int64_t i) {
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int d = 0; d < mesh.dim; ++d) x[static_cast<std::size_t>(d)] = mesh.nodes(i, d);
        out[i] = f(std::span<const double>(x.data(), static_cast<std::size_t>(mesh.dim)), t);
    });
    return out;
}

} // namespace

Discretization::Discretization(const ProblemSpec& spec_, const Mesh& mesh_,
                               const FemMatrices& fem_, TimeGrid grid_)
    : spec(spec_), mesh(mesh_), fem(fem_), grid(grid_) {
    spec.validate();
    if (spec.dim != mesh.dim) throw ValidationError("problem and mesh dimensions differ");
    if (grid.steps < 1) throw ValidationError("time grid needs at least one step");
    if (!(grid.T == spec.T)) throw ValidationError("time grid horizon differs from problem T");

    const Eigen::Index n = mesh.node_count();
    const int nt = grid.steps;

    y0_nodal = interpolate(mesh, spec.initial_value);
    terminal_nodal = (spec.terminal_weight != 0.0) ? interpolate(mesh, spec.terminal_target)
                                                   : Eigen::VectorXd::Zero(n);

    target_nodal.setZero(n, nt + 1);
    if (spec.tracking_weight != 0.0)
        for (int k = 0; k <= nt; ++k) target_nodal.col(k) = interpolate(mesh, spec.target, grid.t(k));

    boundary_loads.setZero(n, nt);
    for (int c = 0; c < nt; ++c)
        boundary_loads.col(c) = fem.boundary_load(interpolate(mesh, spec.boundary_data, grid.t(c + 1)));

    boundary_weights.resize(mesh.boundary_count());
    for (Eigen::Index r = 0; r < mesh.boundary_count(); ++r)
        boundary_weights[r] = fem.boundary_lumped[mesh.boundary_nodes[static_cast<std::size_t>(r)]];

    base = fem.mass / grid.tau() + fem.stiffness;
    base.makeCompressed();
    diagonal.assign(static_cast<std::size_t>(n), -1);
    for (Eigen::Index col = 0; col < n; ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(base, col); it; ++it)
            if (it.row() == col) {
                diagonal[static_cast<std::size_t>(col)] = &it.value() - base.valuePtr();
                break;
            }
    for (Eigen::Index i = 0; i < n; ++i)
        if (diagonal[static_cast<std::size_t>(i)] < 0)
            throw ValidationError("step matrix pattern is missing a diagonal entry");
}

Eigen::VectorXd Discretization::gather_boundary(const Eigen::VectorXd& global) const {
    Eigen::VectorXd out(mesh.boundary_count());
    for (Eigen::Index r = 0; r < out.size(); ++r)
        out[r] = global[mesh.boundary_nodes[static_cast<std::size_t>(r)]];
    return out;
}

double Discretization::control_dot(const BoundaryControlField& a,
                                   const BoundaryControlField& b) const {
    const Eigen::Index nb = a.values.rows();
    double total = 0.0;
    for (int c = 0; c < a.steps(); ++c) {
        const double* pa = a.values.col(c).data();
        const double* pb = b.values.col(c).data();
        double s = 0.0;
        for (Eigen::Index r = 0; r < nb; ++r) s += boundary_weights[r] * pa[r] * pb[r];
        total += s;
    }
    return grid.tau() * total;
}

Eigen::VectorXd Discretization::reaction(const Eigen::VectorXd& y) const {
    Eigen::VectorXd out(y.size());
    const Polynomial& p = spec.nonlinearity;
    par::for_each(y.size(), [&](std::int64_t i) { out[i] = p.eval(y[i]); });
    return out;
}

Eigen::VectorXd Discretization::reaction_d1(const Eigen::VectorXd& y) const {
    Eigen::VectorXd out(y.size());
    const Polynomial& p = spec.nonlinearity;
    par::for_each(y.size(), [&](std::int64_t i) { out[i] = p.d1(y[i]); });
    return out;
}

Eigen::VectorXd Discretization::reaction_d2(const Eigen::VectorXd& y) const {
    Eigen::VectorXd out(y.size());
    const Polynomial& p = spec.nonlinearity;
    par::for_each(y.size(), [&](std::int64_t i) { out[i] = p.d2(y[i]); });
    return out;
}

double Discretization::objective(const StateField& y, const BoundaryControlField& u) const {
    const double tau = grid.tau();
    double value = 0.0;
    if (spec.tracking_weight != 0.0) {
        double acc = 0.0;
        for (int k = 1; k <= grid.steps; ++k) {
            Eigen::VectorXd e = y.values.col(k) - target_nodal.col(k);
            acc += e.dot(fem.mass * e);
        }
        value += 0.5 * spec.tracking_weight * tau * acc;
    }
    if (spec.terminal_weight != 0.0) {
        Eigen::VectorXd e = y.values.col(grid.steps) - terminal_nodal;
        value += 0.5 * spec.terminal_weight * e.dot(fem.mass * e);
    }
    value += 0.5 * spec.tikhonov * control_dot(u, u);
    return value;
}

} // namespace robinsqp
