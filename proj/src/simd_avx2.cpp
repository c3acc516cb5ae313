// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma on x86-64; callers must gate on avx2_kernels() != nullptr,
// which checks cpuid before handing out the table.

#include "camel/simd.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>

namespace camel::simd {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swap = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swap));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double result = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) result += a[i] * b[i];
    return result;
}

double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc0 = _mm256_fmadd_pd(d, d, acc0);
    }
    double result = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        result += d * d;
    }
    return result;
}

double sum_avx2(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double result = hsum(acc);
    for (; i < n; ++i) result += a[i];
    return result;
}

double max_abs_avx2(const double* a, std::size_t n) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d best = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        best = _mm256_max_pd(best, _mm256_and_pd(_mm256_loadu_pd(a + i), mask));
    __m128d lo = _mm256_castpd256_pd128(best);
    __m128d hi = _mm256_extractf128_pd(best, 1);
    lo = _mm_max_pd(lo, hi);
    __m128d swap = _mm_unpackhi_pd(lo, lo);
    double result = _mm_cvtsd_f64(_mm_max_sd(lo, swap));
    for (; i < n; ++i) {
        const double v = std::fabs(a[i]);
        if (v > result) result = v;
    }
    return result;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void soft_threshold_avx2(const double* a, double omega, double* out, std::size_t n) {
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    const __m256d sign_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x8000000000000000LL));
    const __m256d vo = _mm256_set1_pd(omega);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(a + i);
        __m256d shrunk = _mm256_max_pd(_mm256_sub_pd(_mm256_and_pd(v, abs_mask), vo), zero);
        __m256d nonzero = _mm256_cmp_pd(shrunk, zero, _CMP_GT_OQ);
        __m256d signed_val = _mm256_or_pd(shrunk, _mm256_and_pd(v, sign_mask));
        // keep +0.0 (not -0.0) on fully shrunk lanes, matching the scalar path
        _mm256_storeu_pd(out + i, _mm256_and_pd(signed_val, nonzero));
    }
    for (; i < n; ++i) {
        const double mag = std::fabs(a[i]) - omega;
        out[i] = mag > 0.0 ? std::copysign(mag, a[i]) : 0.0;
    }
}

bool cpu_has_avx2_fma() {
#if defined(__GNUC__) || defined(__clang__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

}  // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable table{
        "avx2",
        dot_avx2,
        squared_distance_avx2,
        sum_avx2,
        max_abs_avx2,
        axpy_avx2,
        soft_threshold_avx2,
    };
    static const bool supported = cpu_has_avx2_fma();
    return supported ? &table : nullptr;
}

}  // namespace camel::simd

#else  // non-AVX2 build target

namespace camel::simd {

const KernelTable* avx2_kernels() { return nullptr; }

}  // namespace camel::simd

#endif
