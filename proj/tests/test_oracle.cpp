#include "robinsqp/qp.hpp"
#include "robinsqp/reduced.hpp"

#include "doctest.h"
#include "reference_dense.hpp"
#include "test_helpers.hpp"

#include <cmath>

using namespace robinsqp;
using testutil::Fixture;

namespace {

Eigen::MatrixXd wavy(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd u(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            u(r, c) = 0.3 + 0.2 * std::sin(static_cast<double>(r) + 0.7 * static_cast<double>(c));
    return u;
}

void cross_check(int dim, int level) {
    Fixture fx(benchmark_problem(dim), level);
    const refdense::Setup ref = refdense::make_setup(dim, level);

    REQUIRE(ref.nodes.rows() == fx.mesh.node_count());
    REQUIRE(static_cast<Eigen::Index>(ref.bnodes.size()) == fx.mesh.boundary_count());
    CHECK((ref.nodes - fx.mesh.nodes).cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t r = 0; r < ref.bnodes.size(); ++r)
        CHECK(ref.bnodes[r] == fx.mesh.boundary_nodes[r]);

    CHECK((ref.mass - Eigen::MatrixXd(fx.fem.mass)).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((ref.stiffness - Eigen::MatrixXd(fx.fem.stiffness)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((ref.lumped - fx.fem.lumped_mass).lpNorm<Eigen::Infinity>() <= 1e-14);
    CHECK((ref.bweights - fx.disc.boundary_weights).lpNorm<Eigen::Infinity>() <= 1e-14);
    CHECK((ref.y0 - fx.disc.y0_nodal).lpNorm<Eigen::Infinity>() <= 1e-14);
    CHECK((ref.target - fx.disc.target_nodal).cwiseAbs().maxCoeff() <= 1e-14);

    BoundaryControlField u(fx.disc.boundary_nodes(), fx.disc.steps());
    u.values = wavy(u.values.rows(), u.values.cols());

    const StateField y = solve_state(fx.disc, u);
    const Eigen::MatrixXd y_ref = refdense::state(ref, u.values);
    CHECK((y.values - y_ref).cwiseAbs().maxCoeff() <= 1e-10);

    const StateField phi = solve_adjoint(fx.disc, y, u);
    const Eigen::MatrixXd phi_ref = refdense::adjoint(ref, y_ref, u.values);
    CHECK((phi.values - phi_ref).cwiseAbs().maxCoeff() <= 1e-10);

    const double J = fx.disc.objective(y, u);
    const double J_ref = refdense::objective(ref, y_ref, u.values);
    CHECK(J == doctest::Approx(J_ref).epsilon(1e-12));

    const ReducedEvaluation ev = evaluate(fx.disc, u);
    const Eigen::MatrixXd g_ref = refdense::gradient(ref, y_ref, phi_ref, u.values);
    CHECK((ev.gradient.values - g_ref).cwiseAbs().maxCoeff() <= 1e-10);

    BoundaryControlField a(fx.disc.boundary_nodes(), fx.disc.steps());
    BoundaryControlField b = a;
    a.values = wavy(a.values.rows(), a.values.cols());
    b.values = 0.5 * wavy(b.values.rows(), b.values.cols());
    b.values.row(0).array() += 0.1;
    CHECK(fx.disc.control_dot(a, b) ==
          doctest::Approx(refdense::control_dot(ref, a.values, b.values)).epsilon(1e-13));
}

void cross_check_linearization(int dim, int level) {
    Fixture fx(benchmark_problem(dim), level);
    const refdense::Setup ref = refdense::make_setup(dim, level);

    BoundaryControlField u(fx.disc.boundary_nodes(), fx.disc.steps());
    u.values = wavy(u.values.rows(), u.values.cols());

    Iterate w;
    w.y = solve_state(fx.disc, u);
    w.phi = solve_adjoint(fx.disc, w.y, u);
    w.u = u;
    const LinearizedOperator op(fx.disc, w);

    const refdense::Linearization lin(ref, w.y.values, w.phi.values, u.values);

    BoundaryControlField v(fx.disc.boundary_nodes(), fx.disc.steps());
    v.values = 0.7 * wavy(v.values.rows(), v.values.cols());
    v.values.col(0).array() -= 0.2;

    const StateField zeta = op.state_direction(&v, false);
    const Eigen::MatrixXd zeta_ref = lin.state_dir(v.values);
    CHECK((zeta.values - zeta_ref).cwiseAbs().maxCoeff() <= 1e-10);

    const StateField eta = op.adjoint_direction(zeta, &v, false);
    const Eigen::MatrixXd eta_ref = lin.adjoint_dir(zeta_ref, v.values);
    CHECK((eta.values - eta_ref).cwiseAbs().maxCoeff() <= 1e-10);

    const BoundaryControlField hv = hessian_apply(op, v);
    const Eigen::MatrixXd hv_ref = lin.hess_apply(v.values);
    CHECK((hv.values - hv_ref).cwiseAbs().maxCoeff() <= 1e-9);
}

} // namespace

TEST_CASE("library and dense reference agree on the plane benchmark") {
    cross_check(2, 2);
    cross_check(2, 3);
}

TEST_CASE("library and dense reference agree on the space benchmark") {
    cross_check(3, 2);
}

TEST_CASE("linearized sweeps match the dense reference") {
    cross_check_linearization(2, 2);
    cross_check_linearization(2, 3);
    cross_check_linearization(3, 2);
}
