#include "robinsqp/mesh.hpp"

#include "robinsqp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace robinsqp {

namespace {

double signed_volume(const Mesh& m, const std::array<int, 4>& v) {
    if (m.dim == 2) {
        Eigen::Vector2d a = m.nodes.row(v[1]) - m.nodes.row(v[0]);
        Eigen::Vector2d b = m.nodes.row(v[2]) - m.nodes.row(v[0]);
        return 0.5 * (a.x() * b.y() - a.y() * b.x());
    }
    Eigen::Vector3d a = m.nodes.row(v[1]) - m.nodes.row(v[0]);
    Eigen::Vector3d b = m.nodes.row(v[2]) - m.nodes.row(v[0]);
    Eigen::Vector3d c = m.nodes.row(v[3]) - m.nodes.row(v[0]);
    return a.cross(b).dot(c) / 6.0;
}

void build_2d(Mesh& m) {
    const int n = m.n1d;
    for (int ix = 0; ix < n - 1; ++ix)
        for (int iy = 0; iy < n - 1; ++iy) {
            const int a = m.node_id(ix, iy);
            const int b = m.node_id(ix + 1, iy);
            const int c = m.node_id(ix, iy + 1);
            const int d = m.node_id(ix + 1, iy + 1);
            m.elements.push_back({a, b, d, -1});
            m.elements.push_back({a, d, c, -1});
        }
    for (int i = 0; i < n - 1; ++i) {
        m.boundary_faces.push_back({m.node_id(i, 0), m.node_id(i + 1, 0), -1});
        m.boundary_faces.push_back({m.node_id(i, n - 1), m.node_id(i + 1, n - 1), -1});
        m.boundary_faces.push_back({m.node_id(0, i), m.node_id(0, i + 1), -1});
        m.boundary_faces.push_back({m.node_id(n - 1, i), m.node_id(n - 1, i + 1), -1});
    }
}

void build_3d(Mesh& m) {
    const int n = m.n1d;
    // Six tetrahedra per cube: walk from the low corner to the high corner,
    // one axis at a time, in each of the 3! orders.
    constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int ix = 0; ix < n - 1; ++ix)
        for (int iy = 0; iy < n - 1; ++iy)
            for (int iz = 0; iz < n - 1; ++iz)
                for (const auto& p : perms) {
                    std::array<int, 3> idx = {ix, iy, iz};
                    std::array<int, 4> tet;
                    tet[0] = m.node_id(idx[0], idx[1], idx[2]);
                    for (int s = 0; s < 3; ++s) {
                        idx[p[s]] += 1;
                        tet[s + 1] = m.node_id(idx[0], idx[1], idx[2]);
                    }
                    if (signed_volume(m, tet) < 0.0) std::swap(tet[1], tet[2]);
                    m.elements.push_back(tet);
                }
    // Each boundary square splits along the diagonal induced by the cube
    // triangulation: low corner to high corner within the face plane.
    auto add_face = [&](int axis, int fixed) {
        const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
        for (int i = 0; i < n - 1; ++i)
            for (int j = 0; j < n - 1; ++j) {
                std::array<int, 3> lo{}, d1{}, d2{}, hi{};
                lo[axis] = d1[axis] = d2[axis] = hi[axis] = fixed;
                lo[a1] = i;
                lo[a2] = j;
                d1[a1] = i + 1;
                d1[a2] = j;
                d2[a1] = i;
                d2[a2] = j + 1;
                hi[a1] = i + 1;
                hi[a2] = j + 1;
                const int nlo = m.node_id(lo[0], lo[1], lo[2]);
                const int nd1 = m.node_id(d1[0], d1[1], d1[2]);
                const int nd2 = m.node_id(d2[0], d2[1], d2[2]);
                const int nhi = m.node_id(hi[0], hi[1], hi[2]);
                m.boundary_faces.push_back({nlo, nd1, nhi});
                m.boundary_faces.push_back({nlo, nhi, nd2});
            }
    };
    for (int axis = 0; axis < 3; ++axis) {
        add_face(axis, 0);
        add_face(axis, n - 1);
    }
}

bool on_boundary(const Mesh& m, int id) {
    for (int d = 0; d < m.dim; ++d) {
        const double x = m.nodes(id, d);
        if (x == 0.0 || x == 1.0) return true;
    }
    return false;
}

// Parents of a fine node in the coarse grid: floor/ceil of the halved
// multi-index. Both parents coincide for persisting nodes; otherwise the fine
// node is the midpoint of a coarse element edge (the diagonal conventions
// above make this true for face and cube centers too).
std::pair<int, int> coarse_parents(const Mesh& coarse, const Mesh& fine, int fine_id) {
    std::array<int, 3> fi{0, 0, 0};
    int rem = fine_id;
    if (fine.dim == 3) {
        fi[2] = rem % fine.n1d;
        rem /= fine.n1d;
    }
    fi[1] = rem % fine.n1d;
    fi[0] = rem / fine.n1d;
    std::array<int, 3> lo{}, hi{};
    for (int d = 0; d < 3; ++d) {
        lo[d] = fi[d] / 2;
        hi[d] = (fi[d] + 1) / 2;
    }
    return {coarse.node_id(lo[0], lo[1], lo[2]), coarse.node_id(hi[0], hi[1], hi[2])};
}

void check_nested(const Mesh& coarse, const Mesh& fine) {
    if (fine.dim != coarse.dim || fine.level != coarse.level + 1)
        throw ValidationError("prolongation requires one uniform refinement (got levels " +
                              std::to_string(coarse.level) + " -> " + std::to_string(fine.level) +
                              ")");
}

} // namespace

Mesh build_uniform_mesh(int dim, int level) {
    if (dim != 2 && dim != 3) throw ValidationError("mesh dimension must be 2 or 3");
    if (level < 1 || level > 12) throw ValidationError("mesh level must be in [1, 12]");

    Mesh m;
    m.dim = dim;
    m.level = level;
    m.n1d = (1 << level) + 1;

    const int n = m.n1d;
    const double h = m.h();
    const Eigen::Index count = (dim == 2) ? Eigen::Index(n) * n : Eigen::Index(n) * n * n;
    m.nodes.resize(count, dim);
    if (dim == 2) {
        for (int ix = 0; ix < n; ++ix)
            for (int iy = 0; iy < n; ++iy)
                m.nodes.row(m.node_id(ix, iy)) = Eigen::RowVector2d(ix * h, iy * h);
        build_2d(m);
    } else {
        for (int ix = 0; ix < n; ++ix)
            for (int iy = 0; iy < n; ++iy)
                for (int iz = 0; iz < n; ++iz)
                    m.nodes.row(m.node_id(ix, iy, iz)) =
                        Eigen::RowVector3d(ix * h, iy * h, iz * h);
        build_3d(m);
    }

    m.boundary_index.assign(static_cast<std::size_t>(count), -1);
    for (int id = 0; id < count; ++id)
        if (on_boundary(m, id)) {
            m.boundary_index[static_cast<std::size_t>(id)] =
                static_cast<int>(m.boundary_nodes.size());
            m.boundary_nodes.push_back(id);
        }
    return m;
}

void dump_mesh(const Mesh& mesh, std::ostream& out) {
    out << "dim " << mesh.dim << " level " << mesh.level << " nodes " << mesh.node_count()
        << " elements " << mesh.elements.size() << " boundary_faces " << mesh.boundary_faces.size()
        << "\n";
    for (Eigen::Index i = 0; i < mesh.node_count(); ++i) {
        out << "node " << i;
        for (int d = 0; d < mesh.dim; ++d) out << ' ' << mesh.nodes(i, d);
        out << '\n';
    }
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
        out << "element " << e;
        for (int v = 0; v <= mesh.dim; ++v) out << ' ' << mesh.elements[e][static_cast<size_t>(v)];
        out << '\n';
    }
    for (std::size_t f = 0; f < mesh.boundary_faces.size(); ++f) {
        out << "face " << f;
        for (int v = 0; v < mesh.dim; ++v)
            out << ' ' << mesh.boundary_faces[f][static_cast<size_t>(v)];
        out << '\n';
    }
}

Eigen::VectorXd prolong_nodal(const Mesh& coarse, const Mesh& fine, const Eigen::VectorXd& values) {
    check_nested(coarse, fine);
    if (values.size() != coarse.node_count())
        throw ValidationError("nodal field size does not match the coarse mesh");
    Eigen::VectorXd out(fine.node_count());
    for (int id = 0; id < fine.node_count(); ++id) {
        const auto [lo, hi] = coarse_parents(coarse, fine, id);
        out[id] = (lo == hi) ? values[lo] : 0.5 * (values[lo] + values[hi]);
    }
    return out;
}

StateField prolong_state(const Mesh& coarse, const Mesh& fine, const StateField& field) {
    check_nested(coarse, fine);
    if (field.nodes() != coarse.node_count())
        throw ValidationError("state field does not match the coarse mesh");
    const int nc = field.steps();
    StateField out(fine.node_count(), 2 * nc);
    Eigen::MatrixXd spatial(fine.node_count(), nc + 1);
    for (int k = 0; k <= nc; ++k)
        spatial.col(k) = prolong_nodal(coarse, fine, field.values.col(k));
    for (int k = 0; k <= nc; ++k) out.values.col(2 * k) = spatial.col(k);
    for (int k = 0; k < nc; ++k)
        out.values.col(2 * k + 1) = 0.5 * (spatial.col(k) + spatial.col(k + 1));
    return out;
}

BoundaryControlField prolong_control(const Mesh& coarse, const Mesh& fine,
                                     const BoundaryControlField& field) {
    check_nested(coarse, fine);
    if (field.boundary_nodes() != coarse.boundary_count())
        throw ValidationError("control field does not match the coarse boundary");
    const int nc = field.steps();
    BoundaryControlField out(fine.boundary_count(), 2 * nc);
    for (Eigen::Index r = 0; r < fine.boundary_count(); ++r) {
        const int id = fine.boundary_nodes[static_cast<std::size_t>(r)];
        const auto [lo, hi] = coarse_parents(coarse, fine, id);
        const int blo = coarse.boundary_index[static_cast<std::size_t>(lo)];
        const int bhi = coarse.boundary_index[static_cast<std::size_t>(hi)];
        for (int k = 0; k < nc; ++k) {
            const double v = (blo == bhi) ? field.values(blo, k)
                                          : 0.5 * (field.values(blo, k) + field.values(bhi, k));
            out.values(r, 2 * k) = v;
            out.values(r, 2 * k + 1) = v;
        }
    }
    return out;
}

} // namespace robinsqp
