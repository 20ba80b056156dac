#pragma once

#include <Eigen/Dense>

namespace robinsqp {

/// Uniform partition of [0, T] into `steps` intervals.
struct TimeGrid {
    double T = 1.0;
    int steps = 1;

    double tau() const { return T / steps; }
    double t(int k) const { return T * k / steps; }
};

/// Nodal field over space-time, one column per time level t_0..t_N.
///
/// Three kinds of content share this container:
///  - states y: column k holds y(t_k);
///  - state sensitivities: same layout as y;
///  - adjoints and their sensitivities: the adjoint is constant on each time
///    interval, so column c (c < N) holds its value on (t_c, t_{c+1}] and
///    column N holds the terminal condition. Computed backward, stored
///    forward-indexed.
///
/// The pairing that makes all discrete derivatives exact: control interval c
/// goes with state column c+1 and adjoint column c.
struct StateField {
    Eigen::MatrixXd values; // nodes x (levels + 1)

    StateField() = default;
    StateField(Eigen::Index nodes, int steps) { values.setZero(nodes, steps + 1); }

    Eigen::Index nodes() const { return values.rows(); }
    int steps() const { return static_cast<int>(values.cols()) - 1; }
};

/// Control on the lateral boundary: piecewise linear in space over boundary
/// nodes, piecewise constant in time. Column c holds the value on the
/// interval (t_c, t_{c+1}], i.e. the sample held at the right endpoint.
struct BoundaryControlField {
    Eigen::MatrixXd values; // boundary nodes x intervals

    BoundaryControlField() = default;
    BoundaryControlField(Eigen::Index boundary_nodes, int steps) {
        values.setZero(boundary_nodes, steps);
    }

    Eigen::Index boundary_nodes() const { return values.rows(); }
    int steps() const { return static_cast<int>(values.cols()); }
};

/// One SQP iterate. y and u need not satisfy the state equation; the residual
/// terms of the next step absorb the defect.
struct Iterate {
    StateField y;
    StateField phi;
    BoundaryControlField u;
};

double max_abs(const StateField& f);
double max_abs(const BoundaryControlField& f);

/// ||a - b||_inf / max(1, ||a||_inf), the relative sup-norm increment used by
/// the stopping rule.
double relative_increment(const StateField& a, const StateField& b);
double relative_increment(const BoundaryControlField& a, const BoundaryControlField& b);

void add_scaled(StateField& y, double s, const StateField& dy);
void add_scaled(BoundaryControlField& u, double s, const BoundaryControlField& du);

} // namespace robinsqp
