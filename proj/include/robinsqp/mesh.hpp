#pragma once

#include "robinsqp/fields.hpp"

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <vector>

namespace robinsqp {

/// Uniform simplicial mesh of the unit square or cube at refinement `level`
/// (grid spacing 2^-level). Squares are split into two triangles along the
/// diagonal from the low corner to the high corner; cubes into six tetrahedra
/// sharing the main diagonal. Nodes are ordered lexicographically by
/// coordinates (first coordinate most significant), which keeps every
/// assembled matrix reproducible.
struct Mesh {
    int dim = 2;
    int level = 1;
    int n1d = 3; // nodes per direction

    Eigen::MatrixXd nodes;                          // count x dim
    std::vector<std::array<int, 4>> elements;       // dim+1 vertex ids each
    std::vector<std::array<int, 3>> boundary_faces; // dim vertex ids each
    std::vector<int> boundary_nodes;                // ascending global ids
    std::vector<int> boundary_index;                // global id -> boundary row, -1 inside

    double h() const { return 1.0 / (n1d - 1); }
    Eigen::Index node_count() const { return nodes.rows(); }
    Eigen::Index boundary_count() const { return static_cast<Eigen::Index>(boundary_nodes.size()); }

    int node_id(int ix, int iy, int iz = 0) const {
        int id = ix * n1d + iy;
        if (dim == 3) id = id * n1d + iz;
        return id;
    }
};

Mesh build_uniform_mesh(int dim, int level);

/// Plain-text node/element listing for debugging.
void dump_mesh(const Mesh& mesh, std::ostream& out);

/// P1 interpolation from a mesh to its uniform refinement. New nodes sit at
/// midpoints of coarse element edges, so the fine value is the mean of the
/// two coarse endpoint values.
Eigen::VectorXd prolong_nodal(const Mesh& coarse, const Mesh& fine, const Eigen::VectorXd& values);

/// Space: P1 interpolation per column. Time: linear interpolation onto the
/// halved grid. Requires fine = one refinement of coarse and matching column
/// counts.
StateField prolong_state(const Mesh& coarse, const Mesh& fine, const StateField& field);

/// Space: P1 interpolation along the boundary. Time: each coarse interval is
/// replicated into its two children. Preserves bound constraints entrywise.
BoundaryControlField prolong_control(const Mesh& coarse, const Mesh& fine,
                                     const BoundaryControlField& field);

} // namespace robinsqp
