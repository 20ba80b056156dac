#include "robinsqp/errors.hpp"
#include "robinsqp/mesh.hpp"

#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>

using namespace robinsqp;

namespace {

double element_measure(const Mesh& m, const std::array<int, 4>& verts) {
    Eigen::MatrixXd edges(m.dim, m.dim);
    for (int j = 0; j < m.dim; ++j)
        edges.col(j) =
            (m.nodes.row(verts[static_cast<std::size_t>(j + 1)]) - m.nodes.row(verts[0]))
                .transpose();
    double fact = 1.0;
    for (int j = 2; j <= m.dim; ++j) fact *= j;
    return std::fabs(edges.determinant()) / fact;
}

double face_measure(const Mesh& m, const std::array<int, 3>& verts) {
    if (m.dim == 2) return (m.nodes.row(verts[1]) - m.nodes.row(verts[0])).norm();
    Eigen::Vector3d a = m.nodes.row(verts[1]) - m.nodes.row(verts[0]);
    Eigen::Vector3d b = m.nodes.row(verts[2]) - m.nodes.row(verts[0]);
    return 0.5 * a.cross(b).norm();
}

} // namespace

TEST_CASE("uniform mesh has the expected entity counts") {
    const Mesh m2 = build_uniform_mesh(2, 3);
    const int n2 = (1 << 3) + 1;
    CHECK(m2.n1d == n2);
    CHECK(m2.node_count() == n2 * n2);
    CHECK(m2.elements.size() == 2u * 8 * 8);
    CHECK(m2.boundary_faces.size() == 4u * 8);
    CHECK(m2.boundary_count() == 4 * (n2 - 1));

    const Mesh m3 = build_uniform_mesh(3, 2);
    const int n3 = (1 << 2) + 1;
    CHECK(m3.node_count() == n3 * n3 * n3);
    CHECK(m3.elements.size() == 6u * 4 * 4 * 4);
    CHECK(m3.boundary_faces.size() == 6u * 2 * 4 * 4);
    CHECK(m3.boundary_count() == n3 * n3 * n3 - (n3 - 2) * (n3 - 2) * (n3 - 2));
}

TEST_CASE("node coordinates follow the lexicographic id") {
    const Mesh m = build_uniform_mesh(2, 2);
    const double h = m.h();
    for (int ix = 0; ix < m.n1d; ++ix)
        for (int iy = 0; iy < m.n1d; ++iy) {
            const int id = m.node_id(ix, iy);
            CHECK(m.nodes(id, 0) == ix * h);
            CHECK(m.nodes(id, 1) == iy * h);
        }
}

TEST_CASE("element measures tile the unit domain") {
    for (int dim : {2, 3}) {
        const Mesh m = build_uniform_mesh(dim, 2);
        double vol = 0.0, vmin = 1.0;
        for (const auto& el : m.elements) {
            const double v = element_measure(m, el);
            vol += v;
            vmin = std::min(vmin, v);
        }
        CHECK(vol == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(vmin > 0.0);
    }
}

TEST_CASE("boundary faces tile the whole boundary") {
    for (int dim : {2, 3}) {
        const Mesh m = build_uniform_mesh(dim, 3);
        double area = 0.0;
        for (const auto& f : m.boundary_faces) area += face_measure(m, f);
        CHECK(area == doctest::Approx(2.0 * dim).epsilon(1e-13));
    }
}

TEST_CASE("boundary index is the inverse of the boundary node list") {
    const Mesh m = build_uniform_mesh(3, 2);
    for (std::size_t r = 0; r < m.boundary_nodes.size(); ++r) {
        const int id = m.boundary_nodes[r];
        CHECK(m.boundary_index[static_cast<std::size_t>(id)] == static_cast<int>(r));
        if (r > 0) CHECK(m.boundary_nodes[r - 1] < id);
        bool on = false;
        for (int d = 0; d < m.dim; ++d)
            if (m.nodes(id, d) == 0.0 || m.nodes(id, d) == 1.0) on = true;
        CHECK(on);
    }
    long interior = 0;
    for (int id = 0; id < m.node_count(); ++id)
        if (m.boundary_index[static_cast<std::size_t>(id)] < 0) ++interior;
    CHECK(interior == m.node_count() - m.boundary_count());
}

TEST_CASE("nodal prolongation reproduces linear functions") {
    for (int dim : {2, 3}) {
        const Mesh coarse = build_uniform_mesh(dim, 2);
        const Mesh fine = build_uniform_mesh(dim, 3);

        auto linear = [&](const Mesh& m) {
            Eigen::VectorXd v(m.node_count());
            for (Eigen::Index i = 0; i < m.node_count(); ++i) {
                v[i] = 0.25 + 2.0 * m.nodes(i, 0) - 3.0 * m.nodes(i, 1);
                if (dim == 3) v[i] += 0.5 * m.nodes(i, 2);
            }
            return v;
        };

        const Eigen::VectorXd up = prolong_nodal(coarse, fine, linear(coarse));
        CHECK((up - linear(fine)).lpNorm<Eigen::Infinity>() <= 1e-14);
    }
}

TEST_CASE("prolongation rejects non-nested meshes") {
    const Mesh coarse = build_uniform_mesh(2, 2);
    const Mesh far = build_uniform_mesh(2, 4);
    const Mesh other = build_uniform_mesh(3, 3);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(coarse.node_count());
    CHECK_THROWS_AS(prolong_nodal(coarse, far, v), ValidationError);
    CHECK_THROWS_AS(prolong_nodal(coarse, other, v), ValidationError);
    CHECK_THROWS_AS(prolong_nodal(far, coarse, v), ValidationError);
}

TEST_CASE("state prolongation doubles the time grid and interpolates") {
    const Mesh coarse = build_uniform_mesh(2, 2);
    const Mesh fine = build_uniform_mesh(2, 3);

    StateField field(coarse.node_count(), 4);
    for (int k = 0; k <= 4; ++k)
        for (Eigen::Index i = 0; i < coarse.node_count(); ++i)
            field.values(i, k) = (1.0 + coarse.nodes(i, 0) - 0.5 * coarse.nodes(i, 1)) * k;

    const StateField up = prolong_state(coarse, fine, field);
    CHECK(up.steps() == 8);
    double worst = 0.0;
    for (int j = 0; j <= 8; ++j)
        for (Eigen::Index i = 0; i < fine.node_count(); ++i) {
            const double want =
                (1.0 + fine.nodes(i, 0) - 0.5 * fine.nodes(i, 1)) * (0.5 * j);
            worst = std::max(worst, std::fabs(up.values(i, j) - want));
        }
    CHECK(worst <= 1e-13);
}

TEST_CASE("control prolongation replicates intervals and keeps bounds") {
    const Mesh coarse = build_uniform_mesh(2, 2);
    const Mesh fine = build_uniform_mesh(2, 3);

    BoundaryControlField u(coarse.boundary_count(), 4);
    for (int c = 0; c < 4; ++c)
        for (Eigen::Index r = 0; r < coarse.boundary_count(); ++r)
            u.values(r, c) = 0.1 + 0.3 * static_cast<double>(r % 5) + 0.01 * c;

    const BoundaryControlField up = prolong_control(coarse, fine, u);
    CHECK(up.steps() == 8);
    CHECK(up.boundary_nodes() == fine.boundary_count());
    for (int c = 0; c < 4; ++c)
        CHECK((up.values.col(2 * c) - up.values.col(2 * c + 1)).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(up.values.minCoeff() >= u.values.minCoeff());
    CHECK(up.values.maxCoeff() <= u.values.maxCoeff());

    BoundaryControlField flat(coarse.boundary_count(), 4);
    flat.values.setConstant(0.7);
    const BoundaryControlField upf = prolong_control(coarse, fine, flat);
    CHECK((upf.values.array() == 0.7).all());
}
