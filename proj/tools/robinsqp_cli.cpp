#include "robinsqp/config.hpp"
#include "robinsqp/diagnostics.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <string>

using namespace robinsqp;

namespace {

void print_level(const LevelRun& run) {
    std::printf("level %d: %zu iterations, objective %.16e\n", run.level,
                run.history.size() - 1, run.history.back().objective);
}

int run_solve(const RunConfig& config) {
    const ProblemSpec spec = make_spec(config);
    const ContinuationResult res =
        run_continuation(spec, config.level_max, config.level_max, make_options(config));
    const std::string path = output_path(config);
    write_history(res.levels.back().history, path);
    print_level(res.levels.back());
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

int run_levels(const RunConfig& config) {
    const ProblemSpec spec = make_spec(config);
    const ContinuationResult res =
        run_continuation(spec, config.level_min, config.level_max, make_options(config));
    const std::string path = output_path(config);
    for (const LevelRun& run : res.levels) {
        const std::string file = level_path(path, run.level);
        write_history(run.history, file);
        print_level(run);
        std::printf("wrote %s\n", file.c_str());
    }
    return 0;
}

int run_diagnostics(const RunConfig& config) {
    const ProblemSpec spec = make_spec(config);
    Mesh mesh = build_uniform_mesh(spec.dim, config.level_min);
    FemMatrices fem = assemble(mesh);
    Discretization disc(spec, mesh, fem, TimeGrid{spec.T, 1 << config.level_min});

    BoundaryControlField probe(mesh.boundary_count(), disc.steps());
    probe.values.setConstant(spec.lower + 0.5 * std::min(1.0, spec.upper - spec.lower));

    DiagnosticsReport report;
    report.gradient_fd_error = gradient_check(disc, probe, 5, config.seed);
    const ReducedEvaluation at_probe = evaluate(disc, probe);
    report.hessian_asymmetry = symmetry_check(
        disc, Iterate{at_probe.state, at_probe.adjoint, probe}, 5, config.seed + 1);

    const ContinuationResult res =
        run_continuation(spec, config.level_min, config.level_max, make_options(config));
    Mesh fine = build_uniform_mesh(spec.dim, config.level_max);
    FemMatrices fine_fem = assemble(fine);
    Discretization fine_disc(spec, fine, fine_fem, TimeGrid{spec.T, 1 << config.level_max});

    report.projection_residual = projection_residual(fine_disc, res.iterate);
    const ComplementarityAudit audit = complementarity_audit(fine_disc, res.iterate);
    report.complementarity_margin = audit.margin;
    report.degenerate_fraction = audit.degenerate_fraction;
    report.above_tau = audit.above_tau;
    report.below_tau = audit.below_tau;
    report.tau = audit.tau;
    try {
        report.convergence_slope = convergence_slope(res.levels.back().history);
    } catch (const ValidationError&) {
        report.convergence_slope = 0.0; // too few iterations to fit
    }

    const std::string path = output_path(config);
    const std::string text = emit_report(report);
    write_text(text, path);
    std::fputs(text.c_str(), stdout);
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bilinear Robin-boundary control solver"};
    std::string config_path;
    bool print_config = false;
    app.add_option("--config", config_path, "configuration file, key = value per line");
    app.add_flag("--print-config", print_config, "print the effective configuration and exit");
    app.allow_extras();
    app.footer("Remaining arguments are --key=value overrides of config keys.\n"
               "Exit codes: 0 ok, 2 invalid input, 3 no convergence, 4 I/O failure.");
    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig config;
        if (!config_path.empty()) config = load_config(config_path);
        for (std::string extra : app.remaining()) {
            if (extra.rfind("--", 0) != 0)
                throw ParseError("expected --key=value, got '" + extra + "'", 0, extra);
            apply_override(config, extra.substr(2));
        }
        config.validate();
        if (print_config) {
            std::fputs(emit_config(config).c_str(), stdout);
            return 0;
        }
        if (config.mode == "solve") return run_solve(config);
        if (config.mode == "continuation") return run_levels(config);
        return run_diagnostics(config);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const NoConvergence& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 3;
    }
}
