#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "tseg/kernels.hpp"

namespace tseg::kernels {

#if !defined(TSEG_HAVE_AVX2)
const KernelTable* avx2_table() noexcept { return nullptr; }
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(TSEG_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend detect() noexcept {
    if (const char* env = std::getenv("TSEG_KERNELS"); env && std::string(env) == "scalar")
        return Backend::scalar;
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<int>& selected() noexcept {
    static std::atomic<int> sel{static_cast<int>(detect())};
    return sel;
}

}  // namespace

bool backend_available(Backend b) noexcept {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if defined(TSEG_HAVE_AVX2)
            return cpu_has_avx2();
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table(Backend b) {
    if (!backend_available(b))
        throw std::runtime_error("kernel backend '" + std::string(backend_name(b)) +
                                 "' is not available on this machine");
#if defined(TSEG_HAVE_AVX2)
    if (b == Backend::avx2) return *avx2_table();
#endif
    return scalar_table();
}

Backend active_backend() noexcept { return static_cast<Backend>(selected().load()); }

const KernelTable& active() noexcept {
#if defined(TSEG_HAVE_AVX2)
    if (active_backend() == Backend::avx2) return *avx2_table();
#endif
    return scalar_table();
}

void set_backend(Backend b) {
    if (!backend_available(b)) (void)table(b);  // throws
    selected().store(static_cast<int>(b));
}

std::string_view backend_name(Backend b) noexcept {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

}  // namespace tseg::kernels
