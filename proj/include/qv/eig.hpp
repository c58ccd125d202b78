#pragma once

#include <vector>

#include "qv/complex_matrix.hpp"

namespace qv {

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // real, sorted descending
    ComplexMatrix eigenvectors;       // unit-norm columns, same order
};

// Cyclic complex Jacobi rotation eigensolver for Hermitian matrices. The
// dimensions in this code base never exceed a few dozen, where Jacobi is
// plenty fast and bit-reproducible across runs.
EigenDecomposition hermitian_eig(const ComplexMatrix& m, double hermiticity_tol = kHermTol);

// Moore-Penrose pseudo-inverse via the eigendecomposition of m^dagger * m.
// Singular values at or below rank_tol * sigma_max are treated as zero; the
// numerical rank is written to rank_out when given.
ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double rank_tol = 1e-10,
                             int* rank_out = nullptr);

}  // namespace qv
