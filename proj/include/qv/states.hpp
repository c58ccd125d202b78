#pragma once

#include <array>
#include <span>
#include <vector>

#include "qv/complex_matrix.hpp"
#include "qv/rng.hpp"

namespace qv {

class PureState {
public:
    // Checks normalization within norm_tol.
    static PureState make(std::vector<Complex> amplitudes, double norm_tol = kHermTol);
    static PureState computational(int dim, int index);
    // (e^{i phi_0}, ..., e^{i phi_{d-1}}) / sqrt(d)
    static PureState max_coherent(const std::vector<double>& phases);

    int dim() const { return static_cast<int>(amp_.size()); }
    std::span<const Complex> amplitudes() const { return amp_; }
    const Complex& operator[](int i) const { return amp_[static_cast<std::size_t>(i)]; }

    ComplexMatrix projector() const;

private:
    explicit PureState(std::vector<Complex> a) : amp_(std::move(a)) {}
    std::vector<Complex> amp_;
};

class DensityMatrix {
public:
    // Validated entry point: square, finite, Hermitian within herm_tol, unit
    // trace within trace_tol, eigenvalues >= -psd_tol. The stored matrix is
    // symmetrized so downstream consumers see an exactly Hermitian operator.
    static DensityMatrix make(ComplexMatrix m, double herm_tol = kHermTol,
                              double trace_tol = kTraceTol, double psd_tol = kPsdTol);
    // For internal producers whose construction preserves the invariants
    // exactly (permutation mixing, dephasing, normalized Gram matrices).
    static DensityMatrix unchecked(ComplexMatrix m);

    static DensityMatrix from_pure(const PureState& psi);
    static DensityMatrix maximally_mixed(int dim);

    int dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }
    double purity() const;  // tr(rho^2)

private:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
    ComplexMatrix m_;
};

// Base-2 entropy of a nonnegative spectrum; values in [-psd_tol, 0) are
// treated as exact zeros, anything lower is an error.
double entropy_from_spectrum(std::span<const double> lambda, double psd_tol = kPsdTol);

// Von Neumann entropy in bits.
double von_neumann_entropy(const DensityMatrix& rho);

// Canonical purification on system x reference, reference dimension equal to
// the system dimension, system as the slow index.
PureState purify(const DensityMatrix& rho);

// Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);
// Pure-state shortcut <psi|rho|psi>.
double fidelity(const DensityMatrix& rho, const PureState& psi);

// Hilbert-Schmidt random mixed state: G G^dagger / tr(G G^dagger) with G a
// square standard complex Gaussian (Ginibre) matrix.
DensityMatrix sample_random_mixed(int dim, Rng& rng);

// Diagonal part in the computational basis.
DensityMatrix dephase(const DensityMatrix& rho);

// The four maximally coherent phase states used as the d=4 encoding alphabet.
const std::array<PureState, 4>& encoding_basis_d4();

}  // namespace qv
