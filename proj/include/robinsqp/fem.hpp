#pragma once

#include "robinsqp/mesh.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace robinsqp {

/// P1 operators on a Mesh. All matrices are over global nodes; boundary
/// operators have support on boundary nodes only.
struct FemMatrices {
    Eigen::SparseMatrix<double> stiffness;     // (grad u, diffusion grad v)
    Eigen::SparseMatrix<double> mass;          // (u, v) over the domain
    Eigen::SparseMatrix<double> boundary_mass; // (u, v) over the boundary
    Eigen::VectorXd lumped_mass;               // row sums of mass
    Eigen::VectorXd boundary_lumped;           // row sums of boundary_mass

    /// Boundary load (g, v)_boundary for the P1 interpolant g; exact.
    Eigen::VectorXd boundary_load(const Eigen::VectorXd& g_nodal) const {
        return boundary_mass * g_nodal;
    }
};

/// Assemble the P1 operators. `diffusion` is a constant symmetric positive
/// definite dim x dim tensor (identity when empty). Domain quadrature is
/// exact; boundary quadrature is exact for products of three P1 factors.
FemMatrices assemble(const Mesh& mesh, const Eigen::MatrixXd& diffusion = Eigen::MatrixXd());

/// Weighted boundary operator (c u, v)_boundary for a P1 weight c given by
/// global nodal values; exact for the cubic face integrands.
Eigen::SparseMatrix<double> boundary_bilinear(const Mesh& mesh, const Eigen::VectorXd& c_nodal);

} // namespace robinsqp
