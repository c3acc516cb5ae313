#include "camel/simd.hpp"

#include <cstdlib>
#include <cstring>

namespace camel::simd {
namespace {

const KernelTable* pick_table() {
    const char* env = std::getenv("CAMEL_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
    const KernelTable* vec = avx2_kernels();
    // "avx2" and "auto" both fall back to scalar when the CPU lacks support
    return vec != nullptr ? vec : &scalar_kernels();
}

}  // namespace

const KernelTable& active_kernels() {
    static const KernelTable* table = pick_table();
    return *table;
}

}  // namespace camel::simd
