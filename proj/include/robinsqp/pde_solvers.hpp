#pragma once

#include "robinsqp/discretization.hpp"

#include <Eigen/SparseCholesky>

#include <memory>
#include <vector>

namespace robinsqp {

/// Factorized step matrices  base + diag(lumped_mass a'(y^k) + boundary term)
/// for k = 1..steps, frozen at a pair (y, u). All four sweeps below share
/// them. Factors are cached up to a memory budget (override with the
/// ROBINSQP_FACTOR_CACHE_BYTES environment variable); beyond it each sweep
/// refactorizes on the fly.
class StepSolver {
public:
    StepSolver(const Discretization& disc, const StateField& y, const BoundaryControlField& u);

    /// x with J_k x = rhs, refined to residual <= 1e-12 * max(1, |rhs|_inf).
    Eigen::VectorXd solve(int k, const Eigen::VectorXd& rhs) const;

    /// J_k x without forming J_k.
    Eigen::VectorXd apply(int k, const Eigen::VectorXd& x) const;

private:
    using Factor = Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>;

    void load_matrix(int k, Eigen::SparseMatrix<double>& into) const;
    const Factor& factor(int k) const;

    const Discretization& disc_;
    Eigen::MatrixXd step_diag_; // nodes x steps, column k-1 for step k
    std::vector<std::unique_ptr<Factor>> cache_;
    mutable std::unique_ptr<Factor> lazy_;
    mutable Eigen::SparseMatrix<double> work_;
    mutable int lazy_step_ = -1;
};

/// March the implicit scheme across all steps; Newton per step starts from
/// the previous level and damps by halving when the residual grows.
StateField solve_state(const Discretization& disc, const BoundaryControlField& u);

/// Exact transpose of the scheme linearized at (y, u): backward sweep driven
/// by the tracking misfit, terminal condition from the final-time term.
/// Column c holds the multiplier of step c+1; column `steps` the terminal
/// value.
StateField solve_adjoint(const Discretization& disc, const StateField& y,
                         const BoundaryControlField& u);
StateField solve_adjoint(const StepSolver& solver, const Discretization& disc,
                         const StateField& y);

/// The four linearized sweeps around an iterate w = (y, phi, u). Directions v
/// may be null (no control variation); include_residual adds the defect of w
/// in the state/adjoint equations, which vanishes at feasible iterates.
class LinearizedOperator {
public:
    LinearizedOperator(const Discretization& disc, const Iterate& w);

    StateField state_direction(const BoundaryControlField* v, bool include_residual) const;
    StateField adjoint_direction(const StateField& zeta, const BoundaryControlField* v,
                                 bool include_residual) const;

    const Iterate& iterate() const { return *w_; }
    const Discretization& discretization() const { return disc_; }
    long forward_solves() const { return forward_solves_; }
    long backward_solves() const { return backward_solves_; }

private:
    const Discretization& disc_;
    const Iterate* w_;
    StepSolver solver_;
    mutable long forward_solves_ = 0;
    mutable long backward_solves_ = 0;
};

/// Defect of (y, u) in the step-k state equation.
Eigen::VectorXd state_residual(const Discretization& disc, const StateField& y,
                               const BoundaryControlField& u, int k);

/// Defect of (y, phi, u) in the step-k adjoint equation.
Eigen::VectorXd adjoint_residual(const Discretization& disc, const StateField& y,
                                 const StateField& phi, const BoundaryControlField& u, int k);

/// Plain-text trajectory dump for debugging.
void dump_state(const StateField& y, std::ostream& out);

} // namespace robinsqp
