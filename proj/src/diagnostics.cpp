#include "robinsqp/diagnostics.hpp"

#include "robinsqp/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace robinsqp {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void append_line(std::string& out, const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
}

/// d(r, c) = tikhonov u - y phi at boundary row r, control interval c.
Eigen::MatrixXd switching_function(const Discretization& disc, const Iterate& w) {
    Eigen::MatrixXd d(disc.boundary_nodes(), disc.steps());
    for (int c = 0; c < disc.steps(); ++c)
        for (Eigen::Index r = 0; r < d.rows(); ++r) {
            const int g = disc.mesh.boundary_nodes[static_cast<std::size_t>(r)];
            d(r, c) = disc.spec.tikhonov * w.u.values(r, c) -
                      w.y.values(g, c + 1) * w.phi.values(g, c);
        }
    return d;
}

} // namespace

std::string emit_report(const DiagnosticsReport& report) {
    std::string out;
    append_line(out, "gradient_fd_error", format_double(report.gradient_fd_error));
    append_line(out, "hessian_asymmetry", format_double(report.hessian_asymmetry));
    append_line(out, "projection_residual", format_double(report.projection_residual));
    append_line(out, "complementarity_margin", format_double(report.complementarity_margin));
    append_line(out, "degenerate_fraction", format_double(report.degenerate_fraction));
    append_line(out, "above_tau", std::to_string(report.above_tau));
    append_line(out, "below_tau", std::to_string(report.below_tau));
    append_line(out, "tau", format_double(report.tau));
    append_line(out, "convergence_slope", format_double(report.convergence_slope));
    return out;
}

BoundaryControlField random_direction(Eigen::Index boundary_nodes, int steps,
                                      std::mt19937_64& rng) {
    BoundaryControlField v(boundary_nodes, steps);
    for (int c = 0; c < steps; ++c)
        for (Eigen::Index r = 0; r < boundary_nodes; ++r)
            v.values(r, c) = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    const double scale = max_abs(v);
    if (scale > 0.0) v.values /= scale;
    return v;
}

double gradient_check(const Discretization& disc, const BoundaryControlField& u,
                      int n_directions, std::uint64_t seed) {
    const ReducedEvaluation base = evaluate(disc, u);
    std::mt19937_64 rng(seed);
    const double steps[] = {1e-3, 1e-4, 1e-5, 1e-6, 1e-7};

    const auto objective_at = [&](const BoundaryControlField& probe) {
        return disc.objective(solve_state(disc, probe), probe);
    };

    double worst = 0.0;
    for (int i = 0; i < n_directions; ++i) {
        const BoundaryControlField v = random_direction(disc.boundary_nodes(), disc.steps(), rng);
        const double exact = disc.control_dot(base.gradient, v);

        double best = std::numeric_limits<double>::infinity();
        for (double h : steps) {
            BoundaryControlField plus = u, minus = u;
            plus.values += h * v.values;
            minus.values -= h * v.values;
            const double fd = (objective_at(plus) - objective_at(minus)) / (2.0 * h);
            best = std::min(best, std::fabs(fd - exact) / std::max(1.0, std::fabs(exact)));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

double symmetry_check(const Discretization& disc, const Iterate& w, int n_pairs,
                      std::uint64_t seed) {
    const LinearizedOperator op(disc, w);
    std::mt19937_64 rng(seed);

    double worst = 0.0;
    for (int i = 0; i < n_pairs; ++i) {
        const BoundaryControlField v1 = random_direction(disc.boundary_nodes(), disc.steps(), rng);
        const BoundaryControlField v2 = random_direction(disc.boundary_nodes(), disc.steps(), rng);
        const double a = disc.control_dot(hessian_apply(op, v1), v2);
        const double b = disc.control_dot(hessian_apply(op, v2), v1);
        worst = std::max(worst, std::fabs(a - b) / (1.0 + std::fabs(a)));
    }
    return worst;
}

ComplementarityAudit complementarity_audit(const Discretization& disc, const Iterate& w,
                                           double tau) {
    ComplementarityAudit audit;
    audit.tau = tau > 0.0 ? tau : 1e-3 * disc.spec.tikhonov * (disc.spec.upper - disc.spec.lower);

    const Eigen::MatrixXd d = switching_function(disc, w);
    double active_min = std::numeric_limits<double>::infinity();
    long degenerate = 0;
    for (int c = 0; c < disc.steps(); ++c)
        for (Eigen::Index r = 0; r < d.rows(); ++r) {
            const double uc = w.u.values(r, c);
            const double dc = d(r, c);
            if (dc > audit.tau) ++audit.above_tau;
            if (dc < -audit.tau) ++audit.below_tau;
            if (uc == disc.spec.lower || uc == disc.spec.upper) {
                active_min = std::min(active_min, std::fabs(dc));
                if (std::fabs(dc) <= audit.tau) ++degenerate;
            }
        }
    audit.margin = std::isfinite(active_min) ? active_min : d.cwiseAbs().minCoeff();
    audit.degenerate_fraction =
        static_cast<double>(degenerate) / static_cast<double>(d.size());
    return audit;
}

double projection_residual(const Discretization& disc, const Iterate& w) {
    double worst = 0.0;
    for (int c = 0; c < disc.steps(); ++c)
        for (Eigen::Index r = 0; r < disc.boundary_nodes(); ++r) {
            const int g = disc.mesh.boundary_nodes[static_cast<std::size_t>(r)];
            const double unconstrained =
                w.y.values(g, c + 1) * w.phi.values(g, c) / disc.spec.tikhonov;
            const double fixed =
                std::clamp(unconstrained, disc.spec.lower, disc.spec.upper);
            worst = std::max(worst, std::fabs(w.u.values(r, c) - fixed));
        }
    return worst;
}

double convergence_slope(const std::vector<ConvergenceRecord>& history) {
    std::vector<double> deltas;
    for (const ConvergenceRecord& rec : history)
        if (rec.n >= 1) deltas.push_back(std::max(rec.delta_u, 1e-300));
    if (deltas.size() < 3) throw ValidationError("history too short for a slope fit");
    deltas.pop_back();

    const std::size_t pairs = std::min<std::size_t>(3, deltas.size() - 1);
    const std::size_t first = deltas.size() - 1 - pairs;
    std::vector<double> x, y;
    for (std::size_t j = first; j + 1 < deltas.size(); ++j) {
        x.push_back(std::log(deltas[j]));
        y.push_back(std::log(deltas[j + 1]));
    }
    if (x.size() == 1) return x[0] != 0.0 ? y[0] / x[0] : 0.0;

    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

} // namespace robinsqp
