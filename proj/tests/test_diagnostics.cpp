#include "robinsqp/diagnostics.hpp"

#include "doctest.h"
#include "test_helpers.hpp"

#include <cmath>
#include <random>
#include <string>

using namespace robinsqp;
using testutil::Fixture;

namespace {

std::vector<ConvergenceRecord> synthetic_history(const std::vector<double>& delta_u) {
    std::vector<ConvergenceRecord> h;
    h.push_back({0, 1.0, 0.0, 0.0, 0.0});
    int n = 1;
    for (double d : delta_u) h.push_back({n++, 1.0, d, d, d});
    return h;
}

} // namespace

TEST_CASE("random directions are deterministic, bounded, and sup-normalized") {
    std::mt19937_64 a(42), b(42), c(43);
    const BoundaryControlField v1 = random_direction(16, 4, a);
    const BoundaryControlField v2 = random_direction(16, 4, b);
    const BoundaryControlField v3 = random_direction(16, 4, c);

    CHECK((v1.values - v2.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK((v1.values - v3.values).cwiseAbs().maxCoeff() > 0.0);
    CHECK(v1.values.cwiseAbs().maxCoeff() == 1.0);
    CHECK(v1.values.minCoeff() >= -1.0);
    CHECK(v1.values.maxCoeff() <= 1.0);

    // Consuming one direction advances the stream for the next.
    const BoundaryControlField v4 = random_direction(16, 4, a);
    CHECK((v4.values - v1.values).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("gradient check is at machine scale on the decoupled problem") {
    Fixture fx(testutil::decoupled_spec(2), 2);
    const BoundaryControlField u = testutil::constant_control(fx.disc, 0.6);
    CHECK(gradient_check(fx.disc, u, 3, 42) <= 1e-10);
}

TEST_CASE("gradient check accepts the benchmark discretization") {
    Fixture fx(benchmark_problem(2), 2);
    const BoundaryControlField u = testutil::constant_control(fx.disc, 0.6);
    CHECK(gradient_check(fx.disc, u, 2, 42) <= 1e-6);
}

TEST_CASE("hessian is symmetric in the control metric") {
    Fixture fx(testutil::decoupled_spec(2), 2);
    Iterate w;
    w.y = StateField(fx.disc.nodes(), fx.disc.steps());
    w.phi = StateField(fx.disc.nodes(), fx.disc.steps());
    w.u = testutil::constant_control(fx.disc, 0.6);
    CHECK(symmetry_check(fx.disc, w, 3, 7) <= 1e-14);

    Fixture bench(benchmark_problem(2), 2);
    const BoundaryControlField u = testutil::constant_control(bench.disc, 0.6);
    Iterate wb;
    wb.y = solve_state(bench.disc, u);
    wb.phi = solve_adjoint(bench.disc, wb.y, u);
    wb.u = u;
    CHECK(symmetry_check(bench.disc, wb, 3, 7) <= 1e-10);
}

TEST_CASE("complementarity audit flags a lower-active control") {
    Fixture fx(benchmark_problem(2), 2);
    Iterate w;
    w.y = StateField(fx.disc.nodes(), fx.disc.steps());
    w.phi = StateField(fx.disc.nodes(), fx.disc.steps());
    w.u = testutil::constant_control(fx.disc, fx.spec.lower);
    const long total = fx.disc.boundary_nodes() * fx.disc.steps();

    // Switching function is tikhonov * lower = 0.03 at every node, just above
    // the default threshold 1e-3 * 0.3 * 99.9.
    const ComplementarityAudit a = complementarity_audit(fx.disc, w);
    CHECK(a.tau == doctest::Approx(1e-3 * 0.3 * 99.9).epsilon(1e-12));
    CHECK(a.margin == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(a.above_tau == total);
    CHECK(a.below_tau == 0);
    CHECK(a.degenerate_fraction == 0.0);

    // A larger threshold turns every active node degenerate.
    const ComplementarityAudit b = complementarity_audit(fx.disc, w, 0.05);
    CHECK(b.tau == 0.05);
    CHECK(b.above_tau == 0);
    CHECK(b.below_tau == 0);
    CHECK(b.degenerate_fraction == 1.0);
    CHECK(b.margin == doctest::Approx(0.03).epsilon(1e-12));
}

TEST_CASE("audit without active bounds falls back to the whole cylinder") {
    Fixture fx(benchmark_problem(2), 2);
    Iterate w;
    w.y = StateField(fx.disc.nodes(), fx.disc.steps());
    w.phi = StateField(fx.disc.nodes(), fx.disc.steps());
    w.u = testutil::constant_control(fx.disc, 0.6);
    const ComplementarityAudit a = complementarity_audit(fx.disc, w);
    CHECK(a.margin == doctest::Approx(0.18).epsilon(1e-12));
    CHECK(a.degenerate_fraction == 0.0);
}

TEST_CASE("projection residual measures the fixed point defect") {
    Fixture fx(benchmark_problem(2), 2);
    Iterate w;
    w.y = StateField(fx.disc.nodes(), fx.disc.steps());
    w.phi = StateField(fx.disc.nodes(), fx.disc.steps());

    // Zero state: the projected target is the lower bound everywhere.
    w.u = testutil::constant_control(fx.disc, fx.spec.lower);
    CHECK(projection_residual(fx.disc, w) == 0.0);
    w.u = testutil::constant_control(fx.disc, 0.6);
    CHECK(projection_residual(fx.disc, w) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("log-log slope detects clean quadratic decay") {
    const auto h = synthetic_history({1e-1, 1e-2, 1e-4, 1e-8, 1e-16});
    CHECK(convergence_slope(h) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("slope fit uses only the last three pre-stop pairs") {
    // Early garbage must not affect the fit window.
    const auto h = synthetic_history({0.9, 0.5, 1e-1, 1e-2, 1e-4, 1e-8, 1e-15});
    CHECK(convergence_slope(h) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("slope of a single pair is the log ratio") {
    const auto h = synthetic_history({1e-2, 1e-4, 1e-12});
    CHECK(convergence_slope(h) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("slope needs at least three recorded iterations") {
    CHECK_THROWS_AS(convergence_slope(synthetic_history({1e-2, 1e-4})), ValidationError);
    CHECK_THROWS_AS(convergence_slope({}), ValidationError);
}

TEST_CASE("report serialization is line oriented") {
    DiagnosticsReport rep;
    rep.gradient_fd_error = 2.5e-9;
    rep.hessian_asymmetry = 1e-12;
    rep.projection_residual = 0.0;
    rep.complementarity_margin = 0.25;
    rep.degenerate_fraction = 0.0;
    rep.above_tau = 10;
    rep.below_tau = 3;
    rep.tau = 0.02997;
    rep.convergence_slope = 2.1;

    const std::string text = emit_report(rep);
    CHECK(text.find("gradient_fd_error = 2.5e-09\n") != std::string::npos);
    CHECK(text.find("above_tau = 10\n") != std::string::npos);
    CHECK(text.find("below_tau = 3\n") != std::string::npos);
    CHECK(text.find("convergence_slope = 2.1\n") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 9);
}
