#include "robinsqp/errors.hpp"
#include "robinsqp/reduced.hpp"

#include "doctest.h"
#include "test_helpers.hpp"

#include <cmath>

using namespace robinsqp;
using testutil::Fixture;

TEST_CASE("objective reduces to the control quadrature when tracking is off") {
    ProblemSpec spec = benchmark_problem(2);
    spec.tracking_weight = 0.0;
    Fixture fx(std::move(spec), 3);

    const BoundaryControlField u = testutil::constant_control(fx.disc, 0.6);
    StateField y(fx.disc.nodes(), fx.disc.steps());
    y.values.setRandom();

    // tikhonov/2 * c^2 * |boundary| * T = 0.15 * 0.36 * 4 * 4
    const double J = fx.disc.objective(y, u);
    CHECK(J == doctest::Approx(0.864).epsilon(1e-12));
    CHECK(J == doctest::Approx(0.5 * fx.spec.tikhonov * fx.disc.control_dot(u, u)).epsilon(1e-15));
}

TEST_CASE("control inner product carries the boundary measure") {
    Fixture fx(benchmark_problem(2), 2);
    const BoundaryControlField a = testutil::constant_control(fx.disc, 1.0);
    CHECK(fx.disc.control_dot(a, a) == doctest::Approx(4.0 * 4.0).epsilon(1e-13));

    BoundaryControlField b = a;
    b.values *= 0.25;
    CHECK(fx.disc.control_dot(a, b) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("evaluation at a feasible control is self-consistent") {
    Fixture fx(benchmark_problem(2), 2);
    const BoundaryControlField u = testutil::constant_control(fx.disc, 0.6);
    const ReducedEvaluation ev = evaluate(fx.disc, u);

    CHECK(ev.objective == fx.disc.objective(ev.state, u));
    CHECK(ev.state.steps() == fx.disc.steps());
    CHECK(ev.adjoint.steps() == fx.disc.steps());

    // Nodal gradient definition: tikhonov u - (state trace)(adjoint value).
    double worst = 0.0;
    for (int c = 0; c < fx.disc.steps(); ++c)
        for (Eigen::Index r = 0; r < fx.disc.boundary_nodes(); ++r) {
            const int g = fx.mesh.boundary_nodes[static_cast<std::size_t>(r)];
            const double want = fx.spec.tikhonov * u.values(r, c) -
                                ev.state.values(g, c + 1) * ev.adjoint.values(g, c);
            worst = std::max(worst, std::fabs(ev.gradient.values(r, c) - want));
        }
    CHECK(worst <= 1e-15);
}

TEST_CASE("projection clamps and is idempotent") {
    Fixture fx(benchmark_problem(2), 2);
    BoundaryControlField u(fx.disc.boundary_nodes(), fx.disc.steps());
    u.values.setRandom();
    u.values *= 200.0;

    const BoundaryControlField p = project(u, 0.1, 100.0);
    CHECK(p.values.minCoeff() >= 0.1);
    CHECK(p.values.maxCoeff() <= 100.0);
    const BoundaryControlField pp = project(p, 0.1, 100.0);
    CHECK((pp.values - p.values).cwiseAbs().maxCoeff() == 0.0);

    for (int c = 0; c < fx.disc.steps(); ++c)
        for (Eigen::Index r = 0; r < fx.disc.boundary_nodes(); ++r)
            if (u.values(r, c) > 0.1 && u.values(r, c) < 100.0)
                CHECK(p.values(r, c) == u.values(r, c));

    CHECK_THROWS_AS(project(u, 1.0, 0.5), ValidationError);
}

TEST_CASE("projected gradient solves the decoupled problem exactly") {
    Fixture fx(testutil::decoupled_spec(2), 2);
    const BoundaryControlField u0 = testutil::constant_control(fx.disc, 0.6);

    const Iterate w = projected_gradient_init(fx.disc, u0, 100, 1e-10);
    CHECK((w.u.values.array() == fx.spec.lower).all());
    CHECK(max_abs(w.y) <= 1e-14);
    CHECK(max_abs(w.phi) <= 1e-14);

    const double J = fx.disc.objective(w.y, w.u);
    // tikhonov/2 * lower^2 * |boundary| * T
    CHECK(J == doctest::Approx(0.5 * 0.3 * 0.01 * 16.0).epsilon(1e-12));
}

TEST_CASE("projected gradient reports exhaustion") {
    Fixture fx(testutil::decoupled_spec(2), 2);
    const BoundaryControlField u0 = testutil::constant_control(fx.disc, 50.0);
    CHECK_THROWS_AS(projected_gradient_init(fx.disc, u0, 1, 1e-16), MaxItersExceeded);
}
