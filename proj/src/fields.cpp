#include "robinsqp/fields.hpp"

#include "robinsqp/parallel.hpp"

#include <algorithm>

namespace robinsqp {

namespace {

double rel_inc(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const double diff = par::max_abs_diff(a.data(), b.data(), a.size());
    const double scale = std::max(1.0, par::max_abs(a.data(), a.size()));
    return diff / scale;
}

} // namespace

double max_abs(const StateField& f) { return par::max_abs(f.values.data(), f.values.size()); }

double max_abs(const BoundaryControlField& f) {
    return par::max_abs(f.values.data(), f.values.size());
}

double relative_increment(const StateField& a, const StateField& b) {
    return rel_inc(a.values, b.values);
}

double relative_increment(const BoundaryControlField& a, const BoundaryControlField& b) {
    return rel_inc(a.values, b.values);
}

void add_scaled(StateField& y, double s, const StateField& dy) {
    par::axpy(s, dy.values.data(), y.values.data(), y.values.size());
}

void add_scaled(BoundaryControlField& u, double s, const BoundaryControlField& du) {
    par::axpy(s, du.values.data(), u.values.data(), u.values.size());
}

} // namespace robinsqp
