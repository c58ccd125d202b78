#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "qv/complex_matrix.hpp"
#include "qv/rng.hpp"
#include "qv/states.hpp"

namespace qvtest {

using qv::Complex;
using qv::ComplexMatrix;

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double m = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

inline ComplexMatrix random_matrix(int rows, int cols, qv::Rng& rng) {
    ComplexMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
    return m;
}

inline ComplexMatrix random_hermitian(int n, qv::Rng& rng) {
    ComplexMatrix g = random_matrix(n, n, rng);
    ComplexMatrix h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) = 0.5 * (g(i, j) + std::conj(g(j, i)));
    return h;
}

inline qv::DensityMatrix diagonal_density(const std::vector<double>& probs) {
    const int n = static_cast<int>(probs.size());
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Complex{probs[static_cast<std::size_t>(i)], 0.0};
    return qv::DensityMatrix::make(std::move(m));
}

// Independent elementwise Kronecker product, straight from the definition.
inline ComplexMatrix kron_oracle(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j)
            out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
    return out;
}

// Independent matrix product with a different accumulation order than the
// library kernels.
inline ComplexMatrix gemm_oracle(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows(), b.cols());
    for (int j = 0; j < b.cols(); ++j)
        for (int i = 0; i < a.rows(); ++i) {
            Complex acc{0.0, 0.0};
            for (int k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            c(i, j) = acc;
        }
    return c;
}

// Characteristic polynomial coefficients (monic, highest power first) via the
// Faddeev-LeVerrier recurrence.
inline std::vector<Complex> char_poly(const ComplexMatrix& a) {
    const int n = a.rows();
    std::vector<Complex> coeff(static_cast<std::size_t>(n) + 1, Complex{0.0, 0.0});
    coeff[0] = Complex{1.0, 0.0};
    ComplexMatrix m(n, n);
    for (int k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{k-1} I
        ComplexMatrix am = gemm_oracle(a, m);
        for (int i = 0; i < n; ++i) am(i, i) += coeff[static_cast<std::size_t>(k) - 1];
        m = std::move(am);
        Complex tr{0.0, 0.0};
        ComplexMatrix prod = gemm_oracle(a, m);
        for (int i = 0; i < n; ++i) tr += prod(i, i);
        coeff[static_cast<std::size_t>(k)] = -tr / static_cast<double>(k);
    }
    return coeff;
}

// Durand-Kerner root finder for a monic polynomial.
inline std::vector<Complex> poly_roots(const std::vector<Complex>& coeff) {
    const int deg = static_cast<int>(coeff.size()) - 1;
    auto eval = [&](Complex x) {
        Complex v{0.0, 0.0};
        for (const Complex& c : coeff) v = v * x + c;
        return v;
    };
    std::vector<Complex> roots(static_cast<std::size_t>(deg));
    Complex seed{0.4, 0.9};
    Complex cur{1.0, 0.0};
    for (int i = 0; i < deg; ++i) {
        cur *= seed;
        roots[static_cast<std::size_t>(i)] = cur;
    }
    for (int it = 0; it < 500; ++it) {
        double moved = 0.0;
        for (int i = 0; i < deg; ++i) {
            Complex denom{1.0, 0.0};
            for (int j = 0; j < deg; ++j)
                if (j != i) denom *= roots[static_cast<std::size_t>(i)] - roots[static_cast<std::size_t>(j)];
            const Complex step = eval(roots[static_cast<std::size_t>(i)]) / denom;
            roots[static_cast<std::size_t>(i)] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-14) break;
    }
    return roots;
}

// Sorted-descending real parts of the characteristic roots; the eigenvalue
// oracle for small Hermitian matrices.
inline std::vector<double> eig_oracle(const ComplexMatrix& a) {
    const std::vector<Complex> roots = poly_roots(char_poly(a));
    std::vector<double> out;
    out.reserve(roots.size());
    for (const Complex& r : roots) out.push_back(r.real());
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

// Column-stacking vectorization, vec[c*d + r] = m(r, c).
inline std::vector<Complex> vec_col(const ComplexMatrix& m) {
    std::vector<Complex> v(static_cast<std::size_t>(m.rows()) * m.cols());
    for (int c = 0; c < m.cols(); ++c)
        for (int r = 0; r < m.rows(); ++r) v[static_cast<std::size_t>(c) * m.rows() + r] = m(r, c);
    return v;
}

}  // namespace qvtest
