#include "qv/kernels.hpp"

namespace qv::kernels {

namespace {

void gemm_scalar(const Complex* a, const Complex* b, Complex* c, int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        Complex* ci = c + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) ci[j] = Complex{0.0, 0.0};
        for (int p = 0; p < k; ++p) {
            const Complex aip = a[static_cast<std::size_t>(i) * k + p];
            if (aip == Complex{0.0, 0.0}) continue;
            const Complex* bp = b + static_cast<std::size_t>(p) * n;
            for (int j = 0; j < n; ++j) ci[j] += aip * bp[j];
        }
    }
}

void axpy_scalar(Complex alpha, const Complex* x, Complex* y, int n) {
    for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(Complex alpha, Complex* x, int n) {
    for (int i = 0; i < n; ++i) x[i] *= alpha;
}

Complex dotc_scalar(const Complex* x, const Complex* y, int n) {
    Complex acc{0.0, 0.0};
    for (int i = 0; i < n; ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

Complex dotu_scalar(const Complex* x, const Complex* y, int n) {
    Complex acc{0.0, 0.0};
    for (int i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", gemm_scalar, axpy_scalar, scale_scalar, dotc_scalar,
                         dotu_scalar};
    return ops;
}

}  // namespace qv::kernels
