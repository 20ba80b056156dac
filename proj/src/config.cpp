#include "robinsqp/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string_view>

namespace robinsqp {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view value, int line, const std::string& key) {
    T out{};
    const char* last = value.data() + value.size();
    auto res = std::from_chars(value.data(), last, out);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ParseError("invalid value for key '" + key + "'", line, key);
    return out;
}

std::vector<double> parse_coefficients(std::string_view value, int line, const std::string& key) {
    std::vector<double> out;
    while (true) {
        const std::size_t comma = value.find(',');
        out.push_back(parse_number<double>(trim(value.substr(0, comma)), line, key));
        if (comma == std::string_view::npos) break;
        value.remove_prefix(comma + 1);
    }
    return out;
}

void set_key(RunConfig& c, const std::string& key, std::string_view value, int line) {
    if (key == "dim")
        c.dim = parse_number<int>(value, line, key);
    else if (key == "level_min")
        c.level_min = parse_number<int>(value, line, key);
    else if (key == "level_max")
        c.level_max = parse_number<int>(value, line, key);
    else if (key == "T")
        c.T = parse_number<double>(value, line, key);
    else if (key == "kappa")
        c.kappa = parse_number<double>(value, line, key);
    else if (key == "alpha")
        c.alpha = parse_number<double>(value, line, key);
    else if (key == "beta")
        c.beta = parse_number<double>(value, line, key);
    else if (key == "nonlinearity")
        c.nonlinearity = parse_coefficients(value, line, key);
    else if (key == "target")
        c.target = std::string(value);
    else if (key == "rho")
        c.rho = parse_number<double>(value, line, key);
    else if (key == "max_iters")
        c.max_iters = parse_number<int>(value, line, key);
    else if (key == "seed")
        c.seed = parse_number<std::uint64_t>(value, line, key);
    else if (key == "output")
        c.output = std::string(value);
    else if (key == "mode")
        c.mode = std::string(value);
    else
        throw ParseError("unknown key '" + key + "'", line, key);
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string join_coefficients(const std::vector<double>& coeff) {
    std::string out;
    for (std::size_t i = 0; i < coeff.size(); ++i) {
        if (i > 0) out += ',';
        out += format_double(coeff[i]);
    }
    return out;
}

} // namespace

void RunConfig::validate() const {
    if (dim != 2 && dim != 3) throw ValidationError("dim must be 2 or 3");
    if (level_min < 2 || level_min > level_max || level_max > 12)
        throw ValidationError("2 <= level_min <= level_max <= 12 required");
    if (!std::isfinite(T) || T <= 0.0) throw ValidationError("T > 0 required");
    if (!std::isfinite(kappa) || kappa <= 0.0) throw ValidationError("kappa > 0 required");
    if (!std::isfinite(alpha) || alpha < 0.0) throw ValidationError("alpha >= 0 required");
    if (!(alpha < beta) || !std::isfinite(beta)) throw ValidationError("alpha < beta required");
    if (nonlinearity.empty()) throw ValidationError("nonlinearity needs at least one coefficient");
    for (double a : nonlinearity)
        if (!std::isfinite(a)) throw ValidationError("nonlinearity coefficients must be finite");
    if (target != "cospi" && target != "zero")
        throw ValidationError("target must be cospi or zero");
    if (!std::isfinite(rho) || rho <= 0.0) throw ValidationError("rho > 0 required");
    if (max_iters < 1) throw ValidationError("max_iters >= 1 required");
    if (mode != "solve" && mode != "continuation" && mode != "diagnostics")
        throw ValidationError("mode must be solve, continuation, or diagnostics");
}

RunConfig parse_config(const std::string& text) {
    RunConfig config;
    std::istringstream lines(text);
    std::string raw;
    for (int line = 1; std::getline(lines, raw); ++line) {
        std::string_view s(raw);
        if (const std::size_t hash = s.find('#'); hash != std::string_view::npos)
            s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const std::size_t eq = s.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("expected key = value", line, std::string(s));
        const std::string key(trim(s.substr(0, eq)));
        if (key.empty()) throw ParseError("missing key before '='", line, key);
        set_key(config, key, trim(s.substr(eq + 1)), line);
    }
    config.validate();
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    if (in.bad()) throw IoError("cannot read config '" + path + "'");
    return parse_config(text.str());
}

void apply_override(RunConfig& config, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ParseError("expected key=value override", 0, assignment);
    const std::string key(trim(std::string_view(assignment).substr(0, eq)));
    set_key(config, key, trim(std::string_view(assignment).substr(eq + 1)), 0);
}

std::string emit_config(const RunConfig& c) {
    std::string out = "# key = value per line; # starts a comment\n";
    out += "dim = " + std::to_string(c.dim) + '\n';
    out += "level_min = " + std::to_string(c.level_min) + '\n';
    out += "level_max = " + std::to_string(c.level_max) + '\n';
    out += "T = " + format_double(c.T) + '\n';
    out += "kappa = " + format_double(c.kappa) + '\n';
    out += "alpha = " + format_double(c.alpha) + '\n';
    out += "beta = " + format_double(c.beta) + '\n';
    out += "nonlinearity = " + join_coefficients(c.nonlinearity) + '\n';
    out += "target = " + c.target + '\n';
    out += "rho = " + format_double(c.rho) + '\n';
    out += "max_iters = " + std::to_string(c.max_iters) + '\n';
    out += "seed = " + std::to_string(c.seed) + '\n';
    out += "output = " + c.output + '\n';
    out += "mode = " + c.mode + '\n';
    return out;
}

ProblemSpec make_spec(const RunConfig& config) {
    config.validate();
    ProblemSpec spec = benchmark_problem(config.dim);
    spec.T = config.T;
    spec.tikhonov = config.kappa;
    spec.lower = config.alpha;
    spec.upper = config.beta;
    spec.nonlinearity = Polynomial{config.nonlinearity};
    if (config.target == "zero")
        spec.target = [](std::span<const double>, double) { return 0.0; };
    spec.validate();
    return spec;
}

SqpOptions make_options(const RunConfig& config) {
    SqpOptions opts;
    opts.rho = config.rho;
    opts.max_iters = config.max_iters;
    return opts;
}

std::string emit_history(const std::vector<ConvergenceRecord>& records) {
    if (records.empty()) throw ValidationError("no convergence records to emit");
    std::string out = "n,objective,delta_u,delta_y,delta_phi\n";
    char buf[160];
    for (const ConvergenceRecord& rec : records) {
        if (rec.n == 0)
            std::snprintf(buf, sizeof(buf), "%d,%.16e,,,\n", rec.n, rec.objective);
        else
            std::snprintf(buf, sizeof(buf), "%d,%.16e,%.1e,%.1e,%.1e\n", rec.n, rec.objective,
                          rec.delta_u, rec.delta_y, rec.delta_phi);
        out += buf;
    }
    return out;
}

void write_history(const std::vector<ConvergenceRecord>& records, const std::string& path) {
    write_text(emit_history(records), path);
}

void write_text(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.close();
    if (!out) throw IoError("write to '" + path + "' failed");
}

std::string output_path(const RunConfig& config) {
    std::string name = config.output;
    if (name.empty()) name = config.mode == "diagnostics" ? "diagnostics.txt" : "history.csv";
    std::filesystem::path p(name);
    const char* dir = std::getenv("ROBINSQP_OUTPUT_DIR");
    if (dir && *dir && p.is_relative()) {
        // Redirection is opt-in, so also make sure the target exists.
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        p = std::filesystem::path(dir) / p;
    }
    return p.string();
}

std::string level_path(const std::string& path, int level) {
    std::filesystem::path p(path);
    std::filesystem::path name = p.stem();
    name += "_level" + std::to_string(level);
    name += p.extension();
    p.replace_filename(name);
    return p.string();
}

} // namespace robinsqp
