#pragma once

#include <functional>
#include <span>
#include <vector>

namespace robinsqp {

/// Polynomial in one variable, coefficient of y^i at index i.
struct Polynomial {
    std::vector<double> coeff;

    double eval(double y) const {
        double v = 0.0;
        for (std::size_t i = coeff.size(); i-- > 0;) v = v * y + coeff[i];
        return v;
    }
    double d1(double y) const {
        double v = 0.0;
        for (std::size_t i = coeff.size(); i-- > 1;) v = v * y + coeff[i] * static_cast<double>(i);
        return v;
    }
    double d2(double y) const {
        double v = 0.0;
        for (std::size_t i = coeff.size(); i-- > 2;)
            v = v * y + coeff[i] * static_cast<double>(i) * static_cast<double>(i - 1);
        return v;
    }
};

using SpatialFn = std::function<double(std::span<const double>)>;
using SpaceTimeFn = std::function<double(std::span<const double>, double)>;

/// Data of the control problem
///
///   min  tracking_weight/2 |y - target|^2 over space-time
///      + terminal_weight/2 |y(T) - terminal_target|^2 over space
///      + tikhonov/2 |u|^2 over the lateral boundary,
///
/// subject to  dy/dt - div(diffusion grad y) + a(y) = 0 in the cylinder,
///             conormal derivative + u y = boundary_data on the boundary,
///             y(0) = initial_value,  lower <= u <= upper.
struct ProblemSpec {
    int dim = 2;
    double T = 4.0;
    double tikhonov = 0.3;
    double lower = 0.1;
    double upper = 100.0;

    Polynomial nonlinearity{{0.0, -1.0, 0.0, 1.0}}; // a(y) = y^3 - y

    SpatialFn initial_value;
    SpaceTimeFn boundary_data;
    SpaceTimeFn target;
    double tracking_weight = 1.0;
    double terminal_weight = 0.0;
    SpatialFn terminal_target;

    void validate() const;
};

/// The benchmark configuration: cubic nonlinearity y^3 - y, unit boundary
/// data, initial value prod_i 8 x_i (1 - x_i), and that same profile times
/// cos(pi t) as the tracking target.
ProblemSpec benchmark_problem(int dim);

/// y0(x) = prod_i 8 x_i (1 - x_i)
double benchmark_initial_value(std::span<const double> x);

} // namespace robinsqp
