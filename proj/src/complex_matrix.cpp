#include "qv/complex_matrix.hpp"

#include <cmath>
#include <cstdint>

#include "qv/kernels.hpp"

namespace qv {

ComplexMatrix::ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw DimensionMismatchError("negative matrix dimension");
    data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
                 Complex{0.0, 0.0});
}

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Complex{1.0, 0.0};
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r > 0 ? static_cast<int>(rows.begin()->size()) : 0;
    ComplexMatrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != c)
            throw DimensionMismatchError("ragged initializer rows");
        int j = 0;
        for (Complex v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

ComplexMatrix ComplexMatrix::dagger() const {
    ComplexMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix out(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = std::conj(data_[k]);
    return out;
}

Complex ComplexMatrix::trace() const {
    if (!is_square()) throw NonSquareError("trace of non-square matrix");
    Complex t{0.0, 0.0};
    for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const Complex& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const Complex& v : data_) m = std::max(m, std::abs(v));
    return m;
}

double ComplexMatrix::hermiticity_defect() const {
    if (!is_square()) throw NonSquareError("hermiticity defect of non-square matrix");
    double d = 0.0;
    for (int i = 0; i < rows_; ++i)
        for (int j = i; j < cols_; ++j)
            d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return d;
}

bool ComplexMatrix::all_finite() const {
    for (const Complex& v : data_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionMismatchError("matrix addition shape mismatch");
    kernels::active().axpy(Complex{1.0, 0.0}, other.data(), data(),
                           static_cast<int>(data_.size()));
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionMismatchError("matrix subtraction shape mismatch");
    kernels::active().axpy(Complex{-1.0, 0.0}, other.data(), data(),
                           static_cast<int>(data_.size()));
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex alpha) {
    kernels::active().scale(alpha, data(), static_cast<int>(data_.size()));
    return *this;
}

void ComplexMatrix::add_scaled(Complex alpha, const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionMismatchError("add_scaled shape mismatch");
    kernels::active().axpy(alpha, other.data(), data(), static_cast<int>(data_.size()));
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatchError("matrix product shape mismatch");
    ComplexMatrix c(a.rows(), b.cols());
    kernels::active().gemm(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
    return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, int max_dim) {
    const std::int64_t rr = static_cast<std::int64_t>(a.rows()) * b.rows();
    const std::int64_t cc = static_cast<std::int64_t>(a.cols()) * b.cols();
    if (rr > max_dim || cc > max_dim)
        throw DimensionOverflowError("kronecker product exceeds dimension bound");
    ComplexMatrix out(static_cast<int>(rr), static_cast<int>(cc));
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{0.0, 0.0}) continue;
            for (int p = 0; p < b.rows(); ++p)
                for (int q = 0; q < b.cols(); ++q)
                    out(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_a, int dim_b, Subsystem keep) {
    if (!m.is_square()) throw NonSquareError("partial trace of non-square matrix");
    if (dim_a < 1 || dim_b < 1 || m.rows() != dim_a * dim_b)
        throw DimensionMismatchError("partial trace factor dimensions do not match matrix");
    if (keep == Subsystem::A) {
        ComplexMatrix out(dim_a, dim_a);
        for (int i = 0; i < dim_a; ++i)
            for (int j = 0; j < dim_a; ++j) {
                Complex s{0.0, 0.0};
                for (int k = 0; k < dim_b; ++k) s += m(i * dim_b + k, j * dim_b + k);
                out(i, j) = s;
            }
        return out;
    }
    ComplexMatrix out(dim_b, dim_b);
    for (int p = 0; p < dim_b; ++p)
        for (int q = 0; q < dim_b; ++q) {
            Complex s{0.0, 0.0};
            for (int k = 0; k < dim_a; ++k) s += m(k * dim_b + p, k * dim_b + q);
            out(p, q) = s;
        }
    return out;
}

}  // namespace qv
