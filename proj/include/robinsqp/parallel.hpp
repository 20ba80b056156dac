#pragma once

#include <cstdint>

// Shared-memory kernels used by assembly and the field algebra. Every kernel
// has a serial reference path and an OpenMP path selected at runtime; both
// produce bitwise-identical results because reductions accumulate fixed-size
// blocks in index order, independent of the thread count.

namespace robinsqp::par {

/// Select the serial reference path for all kernels (default: parallel).
void use_serial(bool yes);
bool serial_enabled();

/// Number of OpenMP threads the parallel path would use.
int thread_count();

inline constexpr std::int64_t block = 1024;

/// f(i) for i in [0, n), embarrassingly parallel body.
template <class F>
void for_each(std::int64_t n, F&& f);

double dot(const double* a, const double* b, std::int64_t n);
double max_abs(const double* a, std::int64_t n);
double max_abs_diff(const double* a, const double* b, std::int64_t n);

/// y += s * x
void axpy(double s, const double* x, double* y, std::int64_t n);

namespace detail {
void run_chunked(std::int64_t n, void (*body)(std::int64_t, std::int64_t, void*), void* ctx);
}

template <class F>
void for_each(std::int64_t n, F&& f) {
    auto body = [](std::int64_t lo, std::int64_t hi, void* ctx) {
        auto& fn = *static_cast<F*>(ctx);
        for (std::int64_t i = lo; i < hi; ++i) fn(i);
    };
    detail::run_chunked(n, body, &f);
}

} // namespace robinsqp::par
