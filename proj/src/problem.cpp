#include "robinsqp/problem.hpp"

#include "robinsqp/errors.hpp"

#include <cmath>

namespace robinsqp {

void ProblemSpec::validate() const {
    if (dim != 2 && dim != 3) throw ValidationError("dim must be 2 or 3");
    if (!(T > 0.0)) throw ValidationError("T must be positive");
    if (!(tikhonov > 0.0)) throw ValidationError("tikhonov weight must be positive");
    if (!(lower >= 0.0)) throw ValidationError("lower control bound must be nonnegative");
    if (!(lower < upper)) throw ValidationError("control bounds must satisfy lower < upper");
    if (nonlinearity.coeff.empty()) throw ValidationError("nonlinearity polynomial is empty");
    if (!initial_value) throw ValidationError("initial_value is not set");
    if (!boundary_data) throw ValidationError("boundary_data is not set");
    if (tracking_weight != 0.0 && !target) throw ValidationError("target is not set");
    if (terminal_weight != 0.0 && !terminal_target)
        throw ValidationError("terminal_target is not set");
    if (tracking_weight < 0.0 || terminal_weight < 0.0)
        throw ValidationError("objective weights must be nonnegative");
}

double benchmark_initial_value(std::span<const double> x) {
    double v = 1.0;
    for (double xi : x) v *= 8.0 * xi * (1.0 - xi);
    return v;
}

ProblemSpec benchmark_problem(int dim) {
    ProblemSpec spec;
    spec.dim = dim;
    spec.initial_value = benchmark_initial_value;
    spec.boundary_data = [](std::span<const double>, double) { return 1.0; };
    spec.target = [](std::span<const double> x, double t) {
        return benchmark_initial_value(x) * std::cos(M_PI * t);
    };
    spec.validate();
    return spec;
}

} // namespace robinsqp
