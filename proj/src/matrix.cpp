#include "lipext/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lipext/error.hpp"

namespace lipext {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw ValidationError("ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m;
    m.rows_ = rows.size();
    m.cols_ = rows.empty() ? 0 : rows.front().size();
    m.data_.reserve(m.rows_ * m.cols_);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) {
            throw ValidationError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                  " entries, expected " + std::to_string(m.cols_));
        }
        m.data_.insert(m.data_.end(), rows[i].begin(), rows[i].end());
    }
    return m;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
    std::vector<std::vector<double>> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i].assign(row(i).begin(), row(i).end());
    return out;
}

Matrix Matrix::select(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const {
    Matrix out(row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i)
        for (std::size_t j = 0; j < col_idx.size(); ++j) out(i, j) = (*this)(row_idx[i], col_idx[j]);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool Matrix::is_symmetric(double tol) const noexcept {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    return true;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw ValidationError("matrix product dimension mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw ValidationError("matrix-vector dimension mismatch");
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

LuFactorization lu_factor(const Matrix& a, double rel_tol) {
    if (!a.square()) throw ValidationError("LU factorization needs a square matrix");
    const std::size_t n = a.rows();
    LuFactorization f{a, std::vector<std::size_t>(n), 1, false};
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
    const double threshold = rel_tol * a.max_abs();
    Matrix& lu = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
        if (std::abs(lu(piv, k)) <= threshold || lu(piv, k) == 0.0) {
            f.singular = true;
            return f;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
            f.sign = -f.sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = lu(i, k) / lu(k, k);
            lu(i, k) = l;
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= l * lu(k, j);
        }
    }
    return f;
}

std::vector<double> lu_solve(const LuFactorization& f, std::span<const double> b) {
    if (f.singular) throw NumericalError("cannot solve with a singular LU factorization");
    const std::size_t n = f.lu.rows();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[f.perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
        x[i] = s / f.lu(i, i);
    }
    return x;
}

double determinant(const Matrix& a) {
    if (!a.square()) throw ValidationError("determinant needs a square matrix");
    if (a.rows() == 0) return 1.0;
    // Exact zero pivots only; tiny determinants are legitimate values here.
    const LuFactorization f = lu_factor(a, 0.0);
    if (f.singular) return 0.0;
    double det = f.sign;
    for (std::size_t i = 0; i < a.rows(); ++i) det *= f.lu(i, i);
    return det;
}

Matrix inverse(const Matrix& a) {
    const LuFactorization f = lu_factor(a);
    if (f.singular) throw NumericalError("matrix is numerically singular");
    const std::size_t n = a.rows();
    Matrix inv(n, n);
    std::vector<double> e(n), r(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        std::vector<double> x = lu_solve(f, e);
        // refinement: x += A^{-1}(e - A x)
        for (std::size_t i = 0; i < n; ++i) {
            long double s = e[i];
            for (std::size_t k = 0; k < n; ++k) s -= static_cast<long double>(a(i, k)) * x[k];
            r[i] = static_cast<double>(s);
        }
        const std::vector<double> dx = lu_solve(f, r);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = x[i] + dx[i];
    }
    return inv;
}

Matrix cholesky_factor(const Matrix& a) {
    if (!a.square()) throw ValidationError("Cholesky factorization needs a square matrix");
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) throw NumericalError("matrix is not positive definite");
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

std::vector<double> cholesky_solve(const Matrix& lower, std::span<const double> b) {
    const std::size_t n = lower.rows();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= lower(i, k) * y[k];
        y[i] = s / lower(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = y[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= lower(k, i) * y[k];
        y[i] = s / lower(i, i);
    }
    return y;
}

} // namespace lipext
