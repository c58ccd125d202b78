#include "doctest.h"

#include <cmath>
#include <vector>

#include "qv/complex_matrix.hpp"
#include "qv/eig.hpp"
#include "qv/rng.hpp"

#include "test_support.hpp"

using qv::Complex;
using qv::ComplexMatrix;
using qvtest::max_abs_diff;

namespace {

const Complex I{0.0, 1.0};

ComplexMatrix pauli_x() {
    return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
}

// The Gram-style overlap matrix with spectrum {1/2, 1/4, 1/4, 0}.
ComplexMatrix quarter_overlap_matrix() {
    ComplexMatrix w(4, 4);
    const double v[4][4] = {
        {4.0, 2.0, 2.0, 0.0}, {2.0, 4.0, 0.0, 2.0}, {2.0, 0.0, 4.0, 2.0}, {0.0, 2.0, 2.0, 4.0}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) w(i, j) = Complex{v[i][j] / 16.0, 0.0};
    return w;
}

}  // namespace

TEST_CASE("matrix basics") {
    ComplexMatrix m = ComplexMatrix::from_rows({{1.0 + I, 2.0}, {3.0 * I, -1.0}});
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 2);
    CHECK(std::abs(m.trace() - Complex{0.0, 1.0}) < 1e-15);
    CHECK(m.max_abs() == doctest::Approx(3.0));
    CHECK(m.frobenius_norm() == doctest::Approx(std::sqrt(2.0 + 4.0 + 9.0 + 1.0)));

    ComplexMatrix d = m.dagger();
    CHECK(std::abs(d(0, 1) - Complex{0.0, -3.0}) < 1e-15);
    CHECK(std::abs(d(1, 0) - Complex{2.0, 0.0}) < 1e-15);
    CHECK(max_abs_diff(m.transpose().conjugate(), d) == 0.0);

    ComplexMatrix id = ComplexMatrix::identity(3);
    CHECK(id.hermiticity_defect() == 0.0);
    CHECK(std::abs(id.trace() - Complex{3.0, 0.0}) < 1e-15);

    ComplexMatrix sum = m + m;
    CHECK(max_abs_diff(sum, 2.0 * m) < 1e-15);
    ComplexMatrix acc = m;
    acc.add_scaled(Complex{-2.0, 0.0}, m);
    CHECK(max_abs_diff(acc, Complex{-1.0, 0.0} * m) < 1e-15);
}

TEST_CASE("matrix product matches the oracle") {
    qv::Rng rng(311);
    for (int trial = 0; trial < 10; ++trial) {
        const int m = 1 + static_cast<int>(rng.next_u64() % 7);
        const int k = 1 + static_cast<int>(rng.next_u64() % 7);
        const int n = 1 + static_cast<int>(rng.next_u64() % 7);
        ComplexMatrix a = qvtest::random_matrix(m, k, rng);
        ComplexMatrix b = qvtest::random_matrix(k, n, rng);
        CHECK(max_abs_diff(a * b, qvtest::gemm_oracle(a, b)) < 1e-12);
    }
    ComplexMatrix a = qvtest::random_matrix(3, 4, rng);
    CHECK_THROWS_AS(qvtest::random_matrix(3, 3, rng) * a.transpose() * a,
                    qv::DimensionMismatchError);
}

TEST_CASE("kronecker product") {
    qv::Rng rng(312);
    ComplexMatrix a = qvtest::random_matrix(3, 2, rng);
    ComplexMatrix b = qvtest::random_matrix(2, 4, rng);
    CHECK(max_abs_diff(qv::kron(a, b), qvtest::kron_oracle(a, b)) == 0.0);

    CHECK(max_abs_diff(qv::kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)),
                       ComplexMatrix::identity(4)) == 0.0);

    // I (x) X exchanges inside both blocks: the pair-swap permutation matrix.
    ComplexMatrix expect = ComplexMatrix::from_rows({{0.0, 1.0, 0.0, 0.0},
                                                     {1.0, 0.0, 0.0, 0.0},
                                                     {0.0, 0.0, 0.0, 1.0},
                                                     {0.0, 0.0, 1.0, 0.0}});
    CHECK(max_abs_diff(qv::kron(ComplexMatrix::identity(2), pauli_x()), expect) == 0.0);

    CHECK_THROWS_AS(qv::kron(qvtest::random_matrix(8, 8, rng), qvtest::random_matrix(8, 8, rng), 16),
                    qv::DimensionOverflowError);
}

TEST_CASE("partial trace") {
    qv::Rng rng(313);
    ComplexMatrix a = qvtest::random_matrix(3, 3, rng);
    ComplexMatrix s = qvtest::random_matrix(4, 4, rng);
    const Complex tr_s = s.trace();
    const Complex tr_a = a.trace();

    ComplexMatrix joint = qv::kron(a, s);
    CHECK(max_abs_diff(qv::partial_trace(joint, 3, 4, qv::Subsystem::A), tr_s * a) < 1e-12);
    CHECK(max_abs_diff(qv::partial_trace(joint, 3, 4, qv::Subsystem::B), tr_a * s) < 1e-12);

    // Maximally entangled d=4 pair reduces to I/4 on either side.
    ComplexMatrix bell(16, 16);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) bell(i * 4 + i, j * 4 + j) = Complex{0.25, 0.0};
    ComplexMatrix quarter = Complex{0.25, 0.0} * ComplexMatrix::identity(4);
    CHECK(max_abs_diff(qv::partial_trace(bell, 4, 4, qv::Subsystem::A), quarter) < 1e-15);
    CHECK(max_abs_diff(qv::partial_trace(bell, 4, 4, qv::Subsystem::B), quarter) < 1e-15);

    ComplexMatrix big = qvtest::random_matrix(12, 12, rng);
    const Complex tr = big.trace();
    CHECK(std::abs(qv::partial_trace(big, 3, 4, qv::Subsystem::A).trace() - tr) < 1e-12);
    CHECK(std::abs(qv::partial_trace(big, 4, 3, qv::Subsystem::B).trace() - tr) < 1e-12);

    CHECK_THROWS_AS(qv::partial_trace(qvtest::random_matrix(3, 4, rng), 2, 2, qv::Subsystem::A),
                    qv::NonSquareError);
    CHECK_THROWS_AS(qv::partial_trace(qvtest::random_matrix(6, 6, rng), 4, 2, qv::Subsystem::A),
                    qv::DimensionMismatchError);
}

TEST_CASE("hermitian eigensolver on closed-form cases") {
    SUBCASE("identity") {
        qv::EigenDecomposition e = qv::hermitian_eig(ComplexMatrix::identity(5));
        for (double v : e.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("pauli x") {
        qv::EigenDecomposition e = qv::hermitian_eig(pauli_x());
        CHECK(e.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(e.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-13));
    }
    SUBCASE("2x2 with complex off-diagonal") {
        // trace 5, det 4: spectrum {4, 1}
        ComplexMatrix m = ComplexMatrix::from_rows({{2.0, 1.0 - I}, {1.0 + I, 3.0}});
        qv::EigenDecomposition e = qv::hermitian_eig(m);
        CHECK(e.eigenvalues[0] == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(e.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("quarter overlap matrix") {
        qv::EigenDecomposition e = qv::hermitian_eig(quarter_overlap_matrix());
        CHECK(e.eigenvalues[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(e.eigenvalues[1] == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(e.eigenvalues[2] == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(std::abs(e.eigenvalues[3]) < 1e-12);
    }
}

TEST_CASE("hermitian eigensolver vs characteristic polynomial roots") {
    qv::Rng rng(314);
    for (int n : {2, 3, 4, 5, 6}) {
        ComplexMatrix h = qvtest::random_hermitian(n, rng);
        std::vector<double> expect = qvtest::eig_oracle(h);
        qv::EigenDecomposition e = qv::hermitian_eig(h);
        REQUIRE(static_cast<int>(e.eigenvalues.size()) == n);
        for (int i = 0; i < n; ++i)
            CHECK(e.eigenvalues[static_cast<std::size_t>(i)] ==
                  doctest::Approx(expect[static_cast<std::size_t>(i)]).epsilon(1e-7));
    }
}

TEST_CASE("hermitian eigensolver invariants") {
    qv::Rng rng(315);
    for (int n : {1, 2, 3, 5, 8, 13, 16, 24}) {
        ComplexMatrix h = qvtest::random_hermitian(n, rng);
        qv::EigenDecomposition e = qv::hermitian_eig(h);
        const ComplexMatrix& v = e.eigenvectors;

        // descending order
        for (std::size_t i = 1; i < e.eigenvalues.size(); ++i)
            CHECK(e.eigenvalues[i - 1] >= e.eigenvalues[i]);

        // unitary eigenvector matrix
        CHECK(max_abs_diff(v.dagger() * v, ComplexMatrix::identity(n)) < 1e-11);

        // reconstruction
        ComplexMatrix lam(n, n);
        for (int i = 0; i < n; ++i) lam(i, i) = Complex{e.eigenvalues[static_cast<std::size_t>(i)], 0.0};
        CHECK(max_abs_diff(v * lam * v.dagger(), h) < 1e-10 * std::max(1.0, h.max_abs()));

        // eigenvalue sum equals the trace
        double sum = 0.0;
        for (double x : e.eigenvalues) sum += x;
        CHECK(sum == doctest::Approx(h.trace().real()).epsilon(1e-10));
    }
}

TEST_CASE("hermitian eigensolver input validation") {
    qv::Rng rng(316);
    CHECK_THROWS_AS(qv::hermitian_eig(qvtest::random_matrix(3, 4, rng)), qv::NonSquareError);
    ComplexMatrix bad = ComplexMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    CHECK_THROWS_AS(qv::hermitian_eig(bad), qv::NonHermitianError);
}

TEST_CASE("pseudo-inverse") {
    qv::Rng rng(317);

    SUBCASE("invertible matrix") {
        ComplexMatrix m = qvtest::random_matrix(4, 4, rng);
        m += Complex{4.0, 0.0} * ComplexMatrix::identity(4);  // push away from singular
        int rank = 0;
        ComplexMatrix p = qv::pseudo_inverse(m, 1e-10, &rank);
        CHECK(rank == 4);
        CHECK(max_abs_diff(m * p, ComplexMatrix::identity(4)) < 1e-9);
        CHECK(max_abs_diff(p * m, ComplexMatrix::identity(4)) < 1e-9);
    }

    SUBCASE("diagonal with a kernel") {
        ComplexMatrix m(2, 2);
        m(0, 0) = Complex{2.0, 0.0};
        int rank = 0;
        ComplexMatrix p = qv::pseudo_inverse(m, 1e-10, &rank);
        CHECK(rank == 1);
        CHECK(std::abs(p(0, 0) - Complex{0.5, 0.0}) < 1e-12);
        CHECK(std::abs(p(1, 1)) < 1e-12);
    }

    SUBCASE("penrose conditions on a rank-deficient product") {
        ComplexMatrix b = qvtest::random_matrix(4, 2, rng);
        ComplexMatrix c = qvtest::random_matrix(2, 4, rng);
        ComplexMatrix m = b * c;
        int rank = 0;
        ComplexMatrix p = qv::pseudo_inverse(m, 1e-10, &rank);
        CHECK(rank == 2);
        CHECK(max_abs_diff(m * p * m, m) < 1e-9);
        CHECK(max_abs_diff(p * m * p, p) < 1e-9);
        CHECK((m * p).hermiticity_defect() < 1e-9);
        CHECK((p * m).hermiticity_defect() < 1e-9);
    }

    SUBCASE("zero matrix") {
        int rank = -1;
        ComplexMatrix p = qv::pseudo_inverse(ComplexMatrix(3, 3), 1e-10, &rank);
        CHECK(rank == 0);
        CHECK(p.max_abs() == 0.0);
    }
}
