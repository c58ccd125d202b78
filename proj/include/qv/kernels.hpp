#pragma once

#include <complex>
#include <string_view>

namespace qv::kernels {

using Complex = std::complex<double>;

// One lane of row-major dense complex kernels. All higher-level matrix
// arithmetic funnels through the active lane so the scalar and AVX2 paths
// stay interchangeable.
struct Ops {
    const char* name;
    // c = a * b, a is m x k, b is k x n, all row-major contiguous.
    void (*gemm)(const Complex* a, const Complex* b, Complex* c, int m, int k, int n);
    // y += alpha * x
    void (*axpy)(Complex alpha, const Complex* x, Complex* y, int n);
    // x *= alpha
    void (*scale)(Complex alpha, Complex* x, int n);
    // sum conj(x[i]) * y[i]
    Complex (*dotc)(const Complex* x, const Complex* y, int n);
    // sum x[i] * y[i]
    Complex (*dotu)(const Complex* x, const Complex* y, int n);
};

const Ops& scalar_ops();

// Null when the binary was built without AVX2 support or the CPU lacks
// AVX2/FMA at runtime.
const Ops* avx2_ops();

// Active lane. Defaults to the best available; QV_KERNEL_LANE=scalar|avx2|auto
// overrides at startup.
const Ops& active();

// Force a lane by name ("auto", "scalar", "avx2"). Returns false and leaves
// the lane unchanged when the request cannot be honoured.
bool set_lane(std::string_view name);

namespace detail {
// Provided by kernels_avx2.cpp, or a stub returning null on targets where the
// AVX2 translation unit is not built.
const Ops* avx2_table();
}  // namespace detail

}  // namespace qv::kernels
