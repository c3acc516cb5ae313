#include "camel/simd.hpp"

#include <cmath>

namespace camel::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double sum_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

double max_abs_scalar(const double* a, std::size_t n) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = std::fabs(a[i]);
        if (v > best) best = v;
    }
    return best;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void soft_threshold_scalar(const double* a, double omega, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double mag = std::fabs(a[i]) - omega;
        out[i] = mag > 0.0 ? std::copysign(mag, a[i]) : 0.0;
    }
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{
        "scalar",
        dot_scalar,
        squared_distance_scalar,
        sum_scalar,
        max_abs_scalar,
        axpy_scalar,
        soft_threshold_scalar,
    };
    return table;
}

}  // namespace camel::simd
