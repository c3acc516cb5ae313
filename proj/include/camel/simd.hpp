#pragma once

#include <cstddef>

namespace camel::simd {

// Data-parallel kernels behind the dense linear algebra. Each entry has a
// scalar reference implementation and an AVX2 variant; the two are
// equivalence-tested against each other. The active table is chosen once at
// startup from cpuid and can be overridden with CAMEL_SIMD=scalar|avx2|auto.
struct KernelTable {
    const char* name;

    // sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // sum_i (a[i] - b[i])^2
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
    // sum_i a[i]
    double (*sum)(const double* a, std::size_t n);
    // max_i |a[i]|, 0 for n == 0
    double (*max_abs)(const double* a, std::size_t n);
    // y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // out[i] = sign(a[i]) * max(|a[i]| - omega, 0); omega >= 0
    void (*soft_threshold)(const double* a, double omega, double* out, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the build target or the running CPU has no AVX2+FMA.
const KernelTable* avx2_kernels();

// The table used by the library; dispatch happens once, the result is cached.
const KernelTable& active_kernels();

}  // namespace camel::simd
