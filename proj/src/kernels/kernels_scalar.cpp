#include "tseg/kernels.hpp"

namespace tseg::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* y, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) y[i] *= alpha;
}

double sparse_dot_scalar(const double* w, const std::uint32_t* idx, const double* val,
                         std::size_t nnz) noexcept {
    double s = 0.0;
    for (std::size_t j = 0; j < nnz; ++j) s += w[idx[j]] * val[j];
    return s;
}

DotNorms dot_norms_scalar(const double* a, const double* b, std::size_t n) noexcept {
    DotNorms r;
    for (std::size_t i = 0; i < n; ++i) {
        r.dot += a[i] * b[i];
        r.norm_a2 += a[i] * a[i];
        r.norm_b2 += b[i] * b[i];
    }
    return r;
}

constexpr KernelTable kScalar{dot_scalar, axpy_scalar, scale_scalar, sparse_dot_scalar,
                              dot_norms_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace tseg::kernels
