#include "robinsqp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace robinsqp::par {

namespace {
bool g_serial = false;
}

void use_serial(bool yes) { g_serial = yes; }
bool serial_enabled() { return g_serial; }

int thread_count() {
#ifdef _OPENMP
    return g_serial ? 1 : omp_get_max_threads();
#else
    return 1;
#endif
}

namespace detail {

void run_chunked(std::int64_t n, void (*body)(std::int64_t, std::int64_t, void*), void* ctx) {
    if (g_serial || n < 2 * block) {
        body(0, n, ctx);
        return;
    }
#ifdef _OPENMP
    const std::int64_t nblocks = (n + block - 1) / block;
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nblocks; ++b)
        body(b * block, std::min(n, (b + 1) * block), ctx);
#else
    body(0, n, ctx);
#endif
}

// Per-block partial results are combined serially in block order, so the
// floating-point result does not depend on the thread count.
template <class BlockOp>
double blockwise(std::int64_t n, double init, double (*combine)(double, double), BlockOp op) {
    const std::int64_t nblocks = (n + block - 1) / block;
    if (g_serial || nblocks < 2) {
        double acc = init;
        for (std::int64_t b = 0; b < nblocks; ++b)
            acc = combine(acc, op(b * block, std::min(n, (b + 1) * block)));
        return acc;
    }
    std::vector<double> partial(static_cast<std::size_t>(nblocks));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t b = 0; b < nblocks; ++b)
        partial[static_cast<std::size_t>(b)] = op(b * block, std::min(n, (b + 1) * block));
    double acc = init;
    for (double p : partial) acc = combine(acc, p);
    return acc;
}

double add(double a, double b) { return a + b; }
double take_max(double a, double b) { return a > b ? a : b; }

} // namespace detail

double dot(const double* a, const double* b, std::int64_t n) {
    return detail::blockwise(n, 0.0, detail::add, [&](std::int64_t lo, std::int64_t hi) {
        double s = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) s += a[i] * b[i];
        return s;
    });
}

double max_abs(const double* a, std::int64_t n) {
    return detail::blockwise(n, 0.0, detail::take_max, [&](std::int64_t lo, std::int64_t hi) {
        double m = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) m = std::max(m, std::fabs(a[i]));
        return m;
    });
}

double max_abs_diff(const double* a, const double* b, std::int64_t n) {
    return detail::blockwise(n, 0.0, detail::take_max, [&](std::int64_t lo, std::int64_t hi) {
        double m = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
        return m;
    });
}

void axpy(double s, const double* x, double* y, std::int64_t n) {
    for_each(n, [&](std::int64_t i) { y[i] += s * x[i]; });
}

} // namespace robinsqp::par
