#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "alphamax/errors.hpp"

namespace alphamax {

/// Dense row-major matrix of 64-bit reals.
///
/// Public constructors reject non-finite entries; everything downstream may
/// therefore assume finite data. Only the operations the estimators need are
/// provided; this is not a general BLAS.
class Matrix {
public:
    Matrix() = default;

    /// rows x cols zero matrix.
    Matrix(std::size_t rows, std::size_t cols);

    /// Takes ownership of row-major data. Throws InvalidArgumentError on a
    /// size mismatch or any NaN/Inf entry.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    Matrix transposed() const;
    Matrix times(const Matrix& rhs) const;

    /// Column j as a vector.
    std::vector<double> col(std::size_t j) const;

    double frobenius_norm() const;

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Top-k eigenpairs of a symmetric matrix, eigenvalues descending, eigenvector
/// columns unit-norm with the largest-magnitude entry made positive.
struct EigenPairs {
    std::vector<double> values;  // length k, descending
    Matrix vectors;              // N x k, columns are eigenvectors
};

/// Solves A X = b for symmetric positive definite A via Cholesky.
///
/// Throws SingularMatrixError when a pivot falls below 1e-12 times the largest
/// diagonal entry of A, which signals collinear factors or degenerate loadings.
Matrix solve_spd(const Matrix& a, const Matrix& b);

/// Top-k eigenpairs of symmetric A.
///
/// Cyclic Jacobi sweeps for N <= 64; Householder tridiagonalization followed by
/// implicit-shift QL for larger N. Deterministic for fixed input: fixed sweep
/// order and a sign convention (largest-magnitude entry of each vector made
/// positive, first index winning ties).
///
/// Throws InvalidKError unless 1 <= k <= N, and NoConvergenceError (carrying
/// the attained residual) if the iteration cap is reached or the result fails
/// the residual bound |A v - lambda v| <= 1e-8 (1 + |lambda|) |A|_F.
EigenPairs top_k_eigen(const Matrix& a, std::size_t k);

}  // namespace alphamax
