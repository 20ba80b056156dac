#pragma once

#include "robinsqp/discretization.hpp"
#include "robinsqp/mesh.hpp"
#include "robinsqp/problem.hpp"

#include <utility>

namespace testutil {

/// Owns the whole chain mesh -> operators -> discretization so tests can
/// build a problem in one line. Not movable: the discretization holds
/// references into the other members.
struct Fixture {
    robinsqp::ProblemSpec spec;
    robinsqp::Mesh mesh;
    robinsqp::FemMatrices fem;
    robinsqp::Discretization disc;

    Fixture(robinsqp::ProblemSpec s, int level)
        : spec(std::move(s)),
          mesh(robinsqp::build_uniform_mesh(spec.dim, level)),
          fem(robinsqp::assemble(mesh)),
          disc(spec, mesh, fem, robinsqp::TimeGrid{spec.T, 1 << level}) {}

    Fixture(const Fixture&) = delete;
    Fixture& operator=(const Fixture&) = delete;
};

inline robinsqp::BoundaryControlField constant_control(const robinsqp::Discretization& disc,
                                                       double value) {
    robinsqp::BoundaryControlField u(disc.boundary_nodes(), disc.steps());
    u.values.setConstant(value);
    return u;
}

/// Linear reaction, zero data: the state is identically zero for every
/// control, the reduced objective collapses to the Tikhonov term, and the
/// Hessian is exactly tikhonov * identity. Every optimizer answer is known in
/// closed form.
inline robinsqp::ProblemSpec decoupled_spec(int dim) {
    robinsqp::ProblemSpec spec = robinsqp::benchmark_problem(dim);
    spec.nonlinearity = robinsqp::Polynomial{{0.0, 0.5}};
    spec.initial_value = [](std::span<const double>) { return 0.0; };
    spec.boundary_data = [](std::span<const double>, double) { return 0.0; };
    spec.target = [](std::span<const double>, double) { return 0.0; };
    return spec;
}

} // namespace testutil
