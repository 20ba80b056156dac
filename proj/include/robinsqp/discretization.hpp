#pragma once

#include "robinsqp/fem.hpp"
#include "robinsqp/fields.hpp"
#include "robinsqp/problem.hpp"

#include <Eigen/Sparse>

namespace robinsqp {

/// Everything fixed once problem data, mesh, and time grid are chosen:
/// interpolated data, boundary loads per interval, the time-stepping base
/// matrix, and the lumped boundary weights that define the control-space
/// inner product. Referenced objects must outlive the Discretization.
struct Discretization {
    const ProblemSpec& spec;
    const Mesh& mesh;
    const FemMatrices& fem;
    TimeGrid grid;

    Eigen::VectorXd y0_nodal;
    Eigen::VectorXd terminal_nodal;      // terminal tracking target (zeros if unused)
    Eigen::MatrixXd target_nodal;        // nodes x (steps+1), column k at t_k
    Eigen::MatrixXd boundary_loads;      // nodes x steps, column c for interval c
    Eigen::VectorXd boundary_weights;    // lumped boundary mass per boundary row
    Eigen::SparseMatrix<double> base;    // mass / tau + stiffness
    std::vector<Eigen::Index> diagonal;  // position of (i, i) in base values

    Discretization(const ProblemSpec& spec, const Mesh& mesh, const FemMatrices& fem,
                   TimeGrid grid);

    Eigen::Index nodes() const { return mesh.node_count(); }
    Eigen::Index boundary_nodes() const { return mesh.boundary_count(); }
    int steps() const { return grid.steps; }

    Eigen::VectorXd gather_boundary(const Eigen::VectorXd& global) const;

    /// Inner product on controls: tau-weighted sum over intervals of the
    /// lumped boundary pairing.
    double control_dot(const BoundaryControlField& a, const BoundaryControlField& b) const;

    /// Nodal polynomial sweeps for the reaction term.
    Eigen::VectorXd reaction(const Eigen::VectorXd& y) const;
    Eigen::VectorXd reaction_d1(const Eigen::VectorXd& y) const;
    Eigen::VectorXd reaction_d2(const Eigen::VectorXd& y) const;

    /// Objective evaluated on an arbitrary pair (y, u); y need not solve the
    /// state equation.
    double objective(const StateField& y, const BoundaryControlField& u) const;
};

} // namespace robinsqp
