#include "qv/states.hpp"

#include <cmath>

#include "qv/eig.hpp"
#include "qv/kernels.hpp"

namespace qv {

PureState PureState::make(std::vector<Complex> amplitudes, double norm_tol) {
    if (amplitudes.empty()) throw InvalidStateError("empty state vector");
    double n2 = 0.0;
    for (const Complex& a : amplitudes) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw InvalidStateError("non-finite amplitude");
        n2 += std::norm(a);
    }
    if (std::abs(n2 - 1.0) > norm_tol) throw InvalidStateError("state vector is not normalized");
    return PureState(std::move(amplitudes));
}

PureState PureState::computational(int dim, int index) {
    if (dim < 1 || index < 0 || index >= dim)
        throw InvalidStateError("computational basis index out of range");
    std::vector<Complex> a(static_cast<std::size_t>(dim), Complex{0.0, 0.0});
    a[static_cast<std::size_t>(index)] = Complex{1.0, 0.0};
    return PureState(std::move(a));
}

PureState PureState::max_coherent(const std::vector<double>& phases) {
    if (phases.empty()) throw InvalidStateError("empty phase list");
    const double inv = 1.0 / std::sqrt(static_cast<double>(phases.size()));
    std::vector<Complex> a(phases.size());
    for (std::size_t k = 0; k < phases.size(); ++k)
        a[k] = Complex{inv * std::cos(phases[k]), inv * std::sin(phases[k])};
    return PureState(std::move(a));
}

ComplexMatrix PureState::projector() const {
    const int d = dim();
    ComplexMatrix p(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) p(i, j) = amp_[i] * std::conj(amp_[j]);
    return p;
}

DensityMatrix DensityMatrix::make(ComplexMatrix m, double herm_tol, double trace_tol,
                                  double psd_tol) {
    if (!m.is_square()) throw NonSquareError("density matrix must be square");
    if (!m.all_finite()) throw InvalidStateError("density matrix has non-finite entries");
    if (m.hermiticity_defect() > herm_tol)
        throw NonHermitianError("density matrix is not Hermitian");
    if (std::abs(m.trace() - Complex{1.0, 0.0}) > trace_tol)
        throw InvalidStateError("density matrix trace differs from one");

    const int n = m.rows();
    ComplexMatrix sym(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sym(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

    const EigenDecomposition ed = hermitian_eig(sym);
    for (double lambda : ed.eigenvalues)
        if (lambda < -psd_tol) throw InvalidStateError("density matrix has a negative eigenvalue");
    return DensityMatrix(std::move(sym));
}

DensityMatrix DensityMatrix::unchecked(ComplexMatrix m) { return DensityMatrix(std::move(m)); }

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    return DensityMatrix(psi.projector());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    if (dim < 1) throw InvalidStateError("dimension must be positive");
    ComplexMatrix m = ComplexMatrix::identity(dim);
    m *= Complex{1.0 / dim, 0.0};
    return DensityMatrix(std::move(m));
}

double DensityMatrix::purity() const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j) s += std::norm(m_(i, j));
    return s;
}

double entropy_from_spectrum(std::span<const double> lambda, double psd_tol) {
    double s = 0.0;
    for (double l : lambda) {
        if (l < -psd_tol) throw InvalidStateError("negative weight in spectrum");
        if (l <= 0.0) continue;
        s -= l * std::log2(l);
    }
    return s < 0.0 ? 0.0 : s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    const EigenDecomposition ed = hermitian_eig(rho.matrix());
    return entropy_from_spectrum(ed.eigenvalues);
}

PureState purify(const DensityMatrix& rho) {
    const int d = rho.dim();
    const EigenDecomposition ed = hermitian_eig(rho.matrix());
    std::vector<Complex> amp(static_cast<std::size_t>(d) * d, Complex{0.0, 0.0});
    for (int k = 0; k < d; ++k) {
        const double lambda = std::max(ed.eigenvalues[k], 0.0);
        if (lambda == 0.0) continue;
        const double w = std::sqrt(lambda);
        for (int i = 0; i < d; ++i)
            amp[static_cast<std::size_t>(i) * d + k] = w * ed.eigenvectors(i, k);
    }
    // Eigenvalue dust can leave the norm a hair off one; rescale exactly.
    double n2 = 0.0;
    for (const Complex& a : amp) n2 += std::norm(a);
    if (n2 <= 0.0) throw InvalidStateError("purification of an all-zero spectrum");
    const Complex inv{1.0 / std::sqrt(n2), 0.0};
    kernels::active().scale(inv, amp.data(), static_cast<int>(amp.size()));
    return PureState::make(std::move(amp));
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatchError("fidelity dimension mismatch");
    const int d = a.dim();
    const EigenDecomposition ea = hermitian_eig(a.matrix());

    ComplexMatrix sqrt_a(d, d);
    for (int k = 0; k < d; ++k) {
        const double w = std::sqrt(std::max(ea.eigenvalues[k], 0.0));
        if (w == 0.0) continue;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                sqrt_a(i, j) += w * ea.eigenvectors(i, k) * std::conj(ea.eigenvectors(j, k));
    }

    ComplexMatrix m = sqrt_a * b.matrix() * sqrt_a;
    // Products leave sub-tolerance asymmetry; fold it away before the solve.
    ComplexMatrix h(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    const EigenDecomposition em = hermitian_eig(h, 1e-8);
    double root_sum = 0.0;
    for (double mu : em.eigenvalues) root_sum += std::sqrt(std::max(mu, 0.0));
    const double f = root_sum * root_sum;
    return f > 1.0 ? std::min(f, 1.0 + 1e-9) : f;
}

double fidelity(const DensityMatrix& rho, const PureState& psi) {
    if (rho.dim() != psi.dim()) throw DimensionMismatchError("fidelity dimension mismatch");
    const int d = rho.dim();
    std::vector<Complex> mv(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        mv[static_cast<std::size_t>(i)] =
            kernels::active().dotu(rho.matrix().row(i).data(), psi.amplitudes().data(), d);
    const Complex f = kernels::active().dotc(psi.amplitudes().data(), mv.data(), d);
    return std::max(f.real(), 0.0);
}

DensityMatrix sample_random_mixed(int dim, Rng& rng) {
    if (dim < 1) throw InvalidStateError("dimension must be positive");
    ComplexMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
    ComplexMatrix rho = g * g.dagger();
    const double tr = rho.trace().real();
    rho *= Complex{1.0 / tr, 0.0};
    return DensityMatrix::unchecked(std::move(rho));
}

DensityMatrix dephase(const DensityMatrix& rho) {
    const int d = rho.dim();
    ComplexMatrix out(d, d);
    for (int i = 0; i < d; ++i) out(i, i) = Complex{rho.matrix()(i, i).real(), 0.0};
    return DensityMatrix::unchecked(std::move(out));
}

const std::array<PureState, 4>& encoding_basis_d4() {
    static const std::array<PureState, 4> basis = [] {
        const Complex h{0.5, 0.0};
        const Complex hi{0.0, 0.5};
        return std::array<PureState, 4>{
            PureState::make({h, hi, hi, -h}),
            PureState::make({h, hi, -hi, h}),
            PureState::make({h, -hi, -hi, -h}),
            PureState::make({h, -hi, hi, h}),
        };
    }();
    return basis;
}

}  // namespace qv
