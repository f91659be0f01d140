#pragma once

// Dense arithmetic kernels used by the linear scorer and TextTiling.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant. The variant is chosen once at first use from CPUID; set
// TSEG_KERNELS=scalar in the environment to force the reference path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace tseg::kernels {

enum class Backend { scalar, avx2 };

struct DotNorms {
    double dot = 0.0;
    double norm_a2 = 0.0;
    double norm_b2 = 0.0;
};

struct KernelTable {
    double (*dot)(const double* a, const double* b, std::size_t n) noexcept;
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n) noexcept;
    // y *= alpha
    void (*scale)(double alpha, double* y, std::size_t n) noexcept;
    // sum_j w[idx[j]] * val[j]
    double (*sparse_dot)(const double* w, const std::uint32_t* idx, const double* val,
                         std::size_t nnz) noexcept;
    DotNorms (*dot_norms)(const double* a, const double* b, std::size_t n) noexcept;
};

const KernelTable& scalar_table() noexcept;
const KernelTable* avx2_table() noexcept;  // nullptr when not compiled in

bool backend_available(Backend b) noexcept;
const KernelTable& table(Backend b);
Backend active_backend() noexcept;
const KernelTable& active() noexcept;

// Overrides runtime selection (tests and benchmarks). Throws if unavailable.
void set_backend(Backend b);
std::string_view backend_name(Backend b) noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return active().dot(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
    active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void scale(double alpha, std::span<double> y) noexcept {
    active().scale(alpha, y.data(), y.size());
}
inline double sparse_dot(std::span<const double> w, std::span<const std::uint32_t> idx,
                         std::span<const double> val) noexcept {
    return active().sparse_dot(w.data(), idx.data(), val.data(), idx.size());
}
inline DotNorms dot_norms(std::span<const double> a, std::span<const double> b) noexcept {
    return active().dot_norms(a.data(), b.data(), a.size());
}

}  // namespace tseg::kernels
