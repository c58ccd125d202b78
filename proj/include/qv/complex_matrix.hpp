#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "qv/common.hpp"

namespace qv {

// Row-major dense complex matrix. Dimensions stay small in this code base
// (at most a few hundred on a side), so everything is kept simple and exact.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols);

    static ComplexMatrix identity(int n);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    const Complex& operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }

    Complex* data() { return data_.data(); }
    const Complex* data() const { return data_.data(); }
    std::span<const Complex> row(int i) const {
        return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)};
    }

    ComplexMatrix dagger() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;

    Complex trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    // max-abs entry of (M - M^dagger); zero for exactly Hermitian input
    double hermiticity_defect() const;
    bool all_finite() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex alpha);
    // *this += alpha * other
    void add_scaled(Complex alpha, const ComplexMatrix& other);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(Complex alpha, ComplexMatrix m) { return m *= alpha; }
    friend ComplexMatrix operator*(ComplexMatrix m, Complex alpha) { return m *= alpha; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Complex> data_;
};

// Kronecker product; throws DimensionOverflowError when the result would
// exceed max_dim on a side.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, int max_dim = 1 << 16);

enum class Subsystem { A, B };

// Partial trace of a (dim_a*dim_b) square matrix over the factor NOT kept.
// Ordering convention: index = a * dim_b + b (subsystem A is the slow index).
ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_a, int dim_b, Subsystem keep);

}  // namespace qv
