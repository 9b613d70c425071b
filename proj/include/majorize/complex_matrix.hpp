#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "majorize/errors.hpp"

namespace majorize {

using Complex = std::complex<double>;

/// Numerical slack knobs.  The underlying theory is exact-arithmetic; every
/// tolerance applied by the library is derived from these and scales with the
/// data via `scaled(rel, s) = rel * (1 + s)`.
struct Tolerances {
    double hermitian_rel = 1e-9;
    double commutator_rel = 1e-9;
    double diagonal_rel = 1e-8;
    double unitary_abs = 1e-10;

    static double scaled(double rel, double scale) { return rel * (1.0 + scale); }
};

/// Dense complex matrix, row-major, value semantics.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        require(data_.size() == rows_ * cols_, Errc::DimensionMismatch,
                "entry count does not match matrix shape");
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<const double> d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const Complex> entries() const { return data_; }

    ComplexMatrix adjoint() const {
        ComplexMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require(rows_ == o.rows_ && cols_ == o.cols_, Errc::DimensionMismatch, "operator+=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require(rows_ == o.rows_ && cols_ == o.cols_, Errc::DimensionMismatch, "operator-=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    ComplexMatrix& operator*=(Complex s) {
        for (auto& e : data_) e *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        require(a.cols_ == b.rows_, Errc::DimensionMismatch, "matrix product");
        ComplexMatrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        }
        return r;
    }

    /// Entrywise max modulus (the max-norm used throughout).
    double max_abs() const {
        double m = 0.0;
        for (const auto& e : data_) m = std::max(m, std::abs(e));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& e : data_) s += std::norm(e);
        return std::sqrt(s);
    }

    double hermitian_deviation() const {
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return m;
    }

    /// max |(U*U - I)_{ij}|
    double unitary_deviation() const {
        if (!square()) return 1.0;
        double m = 0.0;
        for (std::size_t i = 0; i < cols_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                Complex s(0.0, 0.0);
                for (std::size_t k = 0; k < rows_; ++k)
                    s += std::conj((*this)(k, i)) * (*this)(k, j);
                if (i == j) s -= 1.0;
                m = std::max(m, std::abs(s));
            }
        }
        return m;
    }

    double off_diagonal_max() const {
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (i != j) m = std::max(m, std::abs((*this)(i, j)));
        return m;
    }

    std::vector<double> real_diagonal() const {
        std::vector<double> d(std::min(rows_, cols_));
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(i, i).real();
        return d;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// Square matrix validated to be unitary at construction.
class Unitary {
public:
    explicit Unitary(ComplexMatrix m, double tol = Tolerances{}.unitary_abs)
        : matrix_(std::move(m)) {
        require(matrix_.square(), Errc::NotUnitary, "unitary must be square");
        const double dev = matrix_.unitary_deviation();
        if (dev > tol)
            fail(Errc::NotUnitary, "deviation " + std::to_string(dev) + " exceeds tolerance");
    }

    static Unitary identity(std::size_t n) { return Unitary(ComplexMatrix::identity(n)); }

    const ComplexMatrix& matrix() const { return matrix_; }
    std::size_t dim() const { return matrix_.rows(); }

    Unitary adjoint() const { return Unitary(matrix_.adjoint()); }

    ComplexMatrix conjugate(const ComplexMatrix& a) const {  // U* a U
        return matrix_.adjoint() * a * matrix_;
    }

private:
    ComplexMatrix matrix_;
};

}  // namespace majorize
