// Compiled with -mavx2 -mfma. Only reached after a CPUID check in dispatch.cpp.
#include <immintrin.h>

#include "tseg/kernels.hpp"

namespace tseg::kernels {
namespace {

inline double hsum(__m256d v) noexcept {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) noexcept {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) noexcept {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_avx2(double alpha, double* y, std::size_t n) noexcept {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        _mm256_storeu_pd(y + i, _mm256_mul_pd(va, _mm256_loadu_pd(y + i)));
        _mm256_storeu_pd(y + i + 4, _mm256_mul_pd(va, _mm256_loadu_pd(y + i + 4)));
    }
    for (; i < n; ++i) y[i] *= alpha;
}

double sparse_dot_avx2(const double* w, const std::uint32_t* idx, const double* val,
                       std::size_t nnz) noexcept {
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= nnz; j += 4) {
        const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + j));
        const __m256d gathered = _mm256_i32gather_pd(w, vi, 8);
        acc = _mm256_fmadd_pd(gathered, _mm256_loadu_pd(val + j), acc);
    }
    double s = hsum(acc);
    for (; j < nnz; ++j) s += w[idx[j]] * val[j];
    return s;
}

DotNorms dot_norms_avx2(const double* a, const double* b, std::size_t n) noexcept {
    __m256d ab = _mm256_setzero_pd();
    __m256d aa = _mm256_setzero_pd();
    __m256d bb = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        ab = _mm256_fmadd_pd(va, vb, ab);
        aa = _mm256_fmadd_pd(va, va, aa);
        bb = _mm256_fmadd_pd(vb, vb, bb);
    }
    DotNorms r{hsum(ab), hsum(aa), hsum(bb)};
    for (; i < n; ++i) {
        r.dot += a[i] * b[i];
        r.norm_a2 += a[i] * a[i];
        r.norm_b2 += b[i] * b[i];
    }
    return r;
}

constexpr KernelTable kAvx2{dot_avx2, axpy_avx2, scale_avx2, sparse_dot_avx2, dot_norms_avx2};

}  // namespace

const KernelTable* avx2_table() noexcept { return &kAvx2; }

}  // namespace tseg::kernels
