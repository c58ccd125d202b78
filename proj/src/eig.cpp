#include "qv/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qv {

namespace {

double offdiag_norm(const ComplexMatrix& a) {
    double s = 0.0;
    const int n = a.rows();
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) s += std::norm(a(p, q));
    return std::sqrt(2.0 * s);
}

}  // namespace

EigenDecomposition hermitian_eig(const ComplexMatrix& m, double hermiticity_tol) {
    if (!m.is_square()) throw NonSquareError("eigendecomposition of non-square matrix");
    if (!m.all_finite()) throw InvalidStateError("eigendecomposition of non-finite matrix");
    if (m.hermiticity_defect() > hermiticity_tol)
        throw NonHermitianError("eigendecomposition input is not Hermitian");

    const int n = m.rows();
    // Symmetrize once so roundoff below the tolerance cannot bias the sweep.
    ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(a.frobenius_norm(), 1e-300);
    const double stop = scale * 1e-15;
    const double skip = scale * 1e-17;
    constexpr int kMaxSweeps = 60;

    for (int sweep = 0; sweep < kMaxSweeps && offdiag_norm(a) > stop; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double b = std::abs(apq);
                if (b <= skip) continue;
                const Complex phase = apq / b;  // e^{i arg(apq)}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * b);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex spp = s * phase;                // J(p,q)
                const Complex spm = s * std::conj(phase);     // -J(q,p)

                // A <- A J (column update), then A <- J^dagger A (row update).
                for (int r = 0; r < n; ++r) {
                    const Complex x = a(r, p);
                    const Complex y = a(r, q);
                    a(r, p) = c * x - spm * y;
                    a(r, q) = spp * x + c * y;
                }
                for (int cc = 0; cc < n; ++cc) {
                    const Complex x = a(p, cc);
                    const Complex y = a(q, cc);
                    a(p, cc) = c * x - spp * y;
                    a(q, cc) = spm * x + c * y;
                }
                for (int r = 0; r < n; ++r) {
                    const Complex x = v(r, p);
                    const Complex y = v(r, q);
                    v(r, p) = c * x - spm * y;
                    v(r, q) = spp * x + c * y;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (int k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (int r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
    }
    return out;
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double rank_tol, int* rank_out) {
    if (!m.is_square()) throw NonSquareError("pseudo-inverse limited to square input here");
    const int n = m.rows();
    const ComplexMatrix md = m.dagger();
    const EigenDecomposition ed = hermitian_eig(md * m, 1e-8);

    // Eigenvalues of m^dagger m are squared singular values.
    std::vector<double> sigma(n);
    for (int k = 0; k < n; ++k) sigma[k] = std::sqrt(std::max(ed.eigenvalues[k], 0.0));
    const double sigma_max = n > 0 ? sigma[0] : 0.0;
    // The eigenvalue route resolves sigma only down to sqrt(eps) relative;
    // below that, dust is indistinguishable from an exact zero.
    const double eps_floor =
        8.0 * std::sqrt(n * std::numeric_limits<double>::epsilon()) * sigma_max;
    const double thresh = std::max(rank_tol * sigma_max, eps_floor);

    int rank = 0;
    while (rank < n && sigma[rank] > thresh && sigma[rank] > 0.0) ++rank;
    if (rank_out != nullptr) *rank_out = rank;

    ComplexMatrix pinv(n, n);
    if (rank == 0) return pinv;

    // pinv = sum_k v_k (1/lambda_k) v_k^dagger m^dagger over retained modes.
    ComplexMatrix proj(n, n);
    for (int k = 0; k < rank; ++k) {
        const double inv_lambda = 1.0 / ed.eigenvalues[k];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                proj(i, j) += inv_lambda * ed.eigenvectors(i, k) * std::conj(ed.eigenvectors(j, k));
    }
    pinv = proj * md;
    return pinv;
}

}  // namespace qv
