#include "robinsqp/fem.hpp"
#include "robinsqp/parallel.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

using namespace robinsqp;

namespace {

template <class F>
double best_ms(int repeats, F&& f) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-14s %10.3f ms %10.3f ms   x%-6.2f %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "bitwise equal" : "DIFFER");
}

} // namespace

int main(int argc, char** argv) {
    const Eigen::Index n = argc > 1 ? std::atoll(argv[1]) : (Eigen::Index{1} << 22);
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;

    std::printf("vector length %lld, %d repeats, %d threads\n\n",
                static_cast<long long>(n), repeats, par::thread_count());

    std::mt19937_64 rng(7);
    Eigen::VectorXd a(n), b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a[i] = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
        b[i] = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    }

    double dot_s = 0.0, dot_p = 0.0;
    par::use_serial(true);
    const double t_dot_s = best_ms(repeats, [&] { dot_s = par::dot(a.data(), b.data(), n); });
    par::use_serial(false);
    const double t_dot_p = best_ms(repeats, [&] { dot_p = par::dot(a.data(), b.data(), n); });
    row("dot", t_dot_s, t_dot_p, dot_s == dot_p);

    double max_s = 0.0, max_p = 0.0;
    par::use_serial(true);
    const double t_max_s = best_ms(repeats, [&] { max_s = par::max_abs(a.data(), n); });
    par::use_serial(false);
    const double t_max_p = best_ms(repeats, [&] { max_p = par::max_abs(a.data(), n); });
    row("max_abs", t_max_s, t_max_p, max_s == max_p);

    Eigen::VectorXd ys = b, yp = b;
    par::use_serial(true);
    const double t_axpy_s = best_ms(repeats, [&] { par::axpy(0.5, a.data(), ys.data(), n); });
    par::use_serial(false);
    const double t_axpy_p = best_ms(repeats, [&] { par::axpy(0.5, a.data(), yp.data(), n); });
    row("axpy", t_axpy_s, t_axpy_p, ys == yp);

    const Mesh mesh = build_uniform_mesh(2, 8);
    FemMatrices fem_s, fem_p;
    par::use_serial(true);
    const double t_asm_s = best_ms(repeats, [&] { fem_s = assemble(mesh); });
    par::use_serial(false);
    const double t_asm_p = best_ms(repeats, [&] { fem_p = assemble(mesh); });
    const bool same = (fem_s.stiffness - fem_p.stiffness).norm() == 0.0 &&
                      (fem_s.mass - fem_p.mass).norm() == 0.0;
    row("assemble(2,8)", t_asm_s, t_asm_p, same);

    par::use_serial(false);
    return 0;
}
