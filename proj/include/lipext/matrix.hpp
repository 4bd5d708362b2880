#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lipext {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    /// Builds from nested rows; throws ValidationError if rows are ragged.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> data() const noexcept { return data_; }

    std::vector<std::vector<double>> to_rows() const;

    /// Submatrix keeping the listed rows and columns, in the given order.
    Matrix select(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const;

    Matrix transpose() const;
    double max_abs() const noexcept;
    bool is_symmetric(double tol = 0.0) const noexcept;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend bool operator==(const Matrix& a, const Matrix& b) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

std::vector<double> operator*(const Matrix& a, std::span<const double> x);

/// Partial-pivot LU factorization PA = LU, stored compactly.
struct LuFactorization {
    Matrix lu;
    std::vector<std::size_t> perm;  // row i of PA is row perm[i] of A
    int sign = 1;
    bool singular = false;
};

/// Pivots with |u_ii| <= rel_tol * max|A| mark the factorization singular.
LuFactorization lu_factor(const Matrix& a, double rel_tol = 1e-14);
std::vector<double> lu_solve(const LuFactorization& f, std::span<const double> b);
double determinant(const Matrix& a);

/// Inverse via LU followed by one step of iterative refinement.
/// Throws NumericalError when the matrix is numerically singular.
Matrix inverse(const Matrix& a);

/// Lower Cholesky factor L with A = L L^T. Throws NumericalError if A is
/// not (numerically) symmetric positive definite.
Matrix cholesky_factor(const Matrix& a);
std::vector<double> cholesky_solve(const Matrix& lower, std::span<const double> b);

} // namespace lipext
