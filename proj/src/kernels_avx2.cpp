// AVX2/FMA lane. This translation unit is compiled with -mavx2 -mfma; the
// dispatcher only hands out the table after a runtime CPU check.

#include <immintrin.h>

#include "qv/kernels.hpp"

namespace qv::kernels {

namespace {

// Two complexes per 256-bit vector, interleaved [re0, im0, re1, im1].

inline __m256d cmul_by_scalar(__m256d ar, __m256d ai, __m256d x) {
    // alpha * x with alpha broadcast as (ar, ai):
    //   re = ar*xr - ai*xi, im = ar*xi + ai*xr
    const __m256d xswap = _mm256_permute_pd(x, 0x5);  // [im0, re0, im1, re1]
    return _mm256_fmaddsub_pd(ar, x, _mm256_mul_pd(ai, xswap));
}

void axpy_avx2(Complex alpha, const Complex* x, Complex* y, int n) {
    const double* xd = reinterpret_cast<const double*>(x);
    double* yd = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    int i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(xd + 2 * i);
        const __m256d vy = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(vy, cmul_by_scalar(ar, ai, vx)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_avx2(Complex alpha, Complex* x, int n) {
    double* xd = reinterpret_cast<double*>(x);
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    int i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(xd + 2 * i);
        _mm256_storeu_pd(xd + 2 * i, cmul_by_scalar(ar, ai, vx));
    }
    for (; i < n; ++i) x[i] *= alpha;
}

void gemm_avx2(const Complex* a, const Complex* b, Complex* c, int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        Complex* ci = c + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) ci[j] = Complex{0.0, 0.0};
        double* cd = reinterpret_cast<double*>(ci);
        for (int p = 0; p < k; ++p) {
            const Complex aip = a[static_cast<std::size_t>(i) * k + p];
            if (aip == Complex{0.0, 0.0}) continue;
            const Complex* bp = b + static_cast<std::size_t>(p) * n;
            const double* bd = reinterpret_cast<const double*>(bp);
            const __m256d ar = _mm256_set1_pd(aip.real());
            const __m256d ai = _mm256_set1_pd(aip.imag());
            int j = 0;
            for (; j + 2 <= n; j += 2) {
                const __m256d vb = _mm256_loadu_pd(bd + 2 * j);
                const __m256d vc = _mm256_loadu_pd(cd + 2 * j);
                _mm256_storeu_pd(cd + 2 * j, _mm256_add_pd(vc, cmul_by_scalar(ar, ai, vb)));
            }
            for (; j < n; ++j) ci[j] += aip * bp[j];
        }
    }
}

Complex dotc_avx2(const Complex* x, const Complex* y, int n) {
    const double* xd = reinterpret_cast<const double*>(x);
    const double* yd = reinterpret_cast<const double*>(y);
    __m256d accp = _mm256_setzero_pd();  // [xr*yr, xi*yi, ...]
    __m256d accq = _mm256_setzero_pd();  // [xi*yr, xr*yi, ...]
    int i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(xd + 2 * i);
        const __m256d vy = _mm256_loadu_pd(yd + 2 * i);
        accp = _mm256_fmadd_pd(vx, vy, accp);
        accq = _mm256_fmadd_pd(_mm256_permute_pd(vx, 0x5), vy, accq);
    }
    alignas(32) double p[4], q[4];
    _mm256_store_pd(p, accp);
    _mm256_store_pd(q, accq);
    // conj(x)*y: re = xr*yr + xi*yi, im = xr*yi - xi*yr
    Complex acc{p[0] + p[1] + p[2] + p[3], (q[1] - q[0]) + (q[3] - q[2])};
    for (; i < n; ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

Complex dotu_avx2(const Complex* x, const Complex* y, int n) {
    const double* xd = reinterpret_cast<const double*>(x);
    const double* yd = reinterpret_cast<const double*>(y);
    __m256d accp = _mm256_setzero_pd();
    __m256d accq = _mm256_setzero_pd();
    int i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(xd + 2 * i);
        const __m256d vy = _mm256_loadu_pd(yd + 2 * i);
        accp = _mm256_fmadd_pd(vx, vy, accp);
        accq = _mm256_fmadd_pd(_mm256_permute_pd(vx, 0x5), vy, accq);
    }
    alignas(32) double p[4], q[4];
    _mm256_store_pd(p, accp);
    _mm256_store_pd(q, accq);
    // x*y: re = xr*yr - xi*yi, im = xi*yr + xr*yi
    Complex acc{(p[0] - p[1]) + (p[2] - p[3]), (q[0] + q[1]) + (q[2] + q[3])};
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

}  // namespace

namespace detail {

const Ops* avx2_table() {
    static const Ops ops{"avx2", gemm_avx2, axpy_avx2, scale_avx2, dotc_avx2, dotu_avx2};
    return &ops;
}

}  // namespace detail

}  // namespace qv::kernels
