#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lipext/execution.hpp"
#include "lipext/matrix.hpp"

namespace lipext {

/// Symmetric non-negative weights lambda on I x I with zero diagonal.
class WeightFunction {
public:
    WeightFunction() = default;
    /// Throws ValidationError on asymmetry, negative entries, a nonzero
    /// diagonal, or a non-square matrix.
    explicit WeightFunction(Matrix lambda);

    std::size_t size() const noexcept { return lambda_.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return lambda_(i, j); }
    const Matrix& matrix() const noexcept { return lambda_; }

private:
    Matrix lambda_;
};

/// Sorted complement of `subset` in {0, ..., n-1}.
std::vector<std::size_t> complement(const std::vector<std::size_t>& subset, std::size_t n);

struct MatrixClassification {
    bool square = false;
    bool symmetric = false;
    bool off_diagonal_nonpositive = false;
    bool strictly_diagonally_dominant = false;
    bool invertible = false;
    bool inverse_nonnegative = false;
    double zero_tolerance = 0.0;  // 1e-12 * max-norm used for the sign tests

    bool is_m_matrix() const noexcept { return off_diagonal_nonpositive && invertible && inverse_nonnegative; }
    /// "M-matrix", "not invertible", or "not an M-matrix".
    std::string verdict() const;
};

/// A square matrix together with its inverse and classification.
struct MMatrixBundle {
    Matrix m;
    Matrix c;
    MatrixClassification flags;
    /// max_ij |(C M - I)_ij|
    double inverse_residual = 0.0;
};

/// Classifies M (inverse computed with LU + one refinement step).
MatrixClassification is_m_matrix(const Matrix& m);

/// Bundles M with its inverse. Throws NumericalError if M is singular.
MMatrixBundle make_bundle(Matrix m);

/// M(lambda, J): rows/columns follow the ascending order of J; diagonal
/// sum_{k in J^c} lambda_ik + sum_{j in J} lambda_ij, off-diagonal -lambda_ij.
/// Throws NumericalError when the matrix is singular.
MMatrixBundle build_m_matrix(const WeightFunction& lambda, const std::vector<std::size_t>& free_set);

/// 3 on the diagonal, -1 on the first off-diagonals. Requires m >= 2.
MMatrixBundle tridiagonal_example(std::size_t m);

struct Theorem61Check {
    double lhs = 0.0;  // (1/2) sum_ij |m_ij| |c_ik c_jl - c_jk c_il|
    double rhs = 0.0;  // (m-1) c_kl
    bool holds = false;  // lhs <= rhs (1 + 1e-9) + 1e-12
};

/// Requires a symmetric M-matrix bundle and k != l (0-based).
Theorem61Check theorem61_check(const MMatrixBundle& bundle, std::size_t k, std::size_t l);

struct ZeroRowSumCheck {
    double first_residual = 0.0;                 // |sum_j |m_kj|(c_kk c_jl - c_jk c_kl) - c_kl|
    std::vector<double> other_residuals;         // |sum_j |m_ij|(c_ik c_jl - c_jk c_il)| for i != k, l
    double scale = 0.0;                          // max_i sum_j |m_ij| * max|C|^2
    double max_residual() const;
    bool holds(double rel_tol = 1e-9) const;     // max_residual <= rel_tol * max(1, scale)
};

ZeroRowSumCheck zero_row_sum_check(const MMatrixBundle& bundle, std::size_t k, std::size_t l);

struct ZeroPatternCheck {
    enum class Status { pass, fail, inapplicable };
    Status status = Status::inapplicable;
    bool row_or_column = false;     // m_ki = 0 or c_il = 0 for all i
    bool row_or_row = false;        // m_ki = 0 or m_il = 0 for all i
    bool enough_zeros = false;      // M has >= m-1 zero entries
    std::size_t zero_entries = 0;
};

/// Applies only when c_kl vanishes (|c_kl| <= 1e-12 * max|C|).
ZeroPatternCheck zero_pattern_check(const MMatrixBundle& bundle, std::size_t k, std::size_t l);

struct GenericityCheck {
    bool generic = false;
    /// First vanishing minor in enumeration order (size, then row mask, then
    /// column mask): 0-based row and column sets.
    std::optional<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> first_failure;
    std::size_t minors_checked = 0;
};

/// Every square minor must satisfy |det| > tol * (Hadamard bound of the
/// submatrix). Requires m <= 8.
GenericityCheck is_generic(const Matrix& a, double tol = 1e-10, Execution exec = Execution::parallel);

/// Relative gap between |det(A^{-1}[I,J]) det A| and |det A[J^c, I^c]|.
/// The empty minor is 1. Throws NumericalError if A is singular.
double jacobi_residual(const Matrix& a, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols);

/// Skew-symmetric matrix of 2x2 minors a_ik a_jl - a_jk a_il.
Matrix pair_minor_matrix(const Matrix& a, std::size_t k, std::size_t l);

struct SignPatternSignature {
    std::vector<std::size_t> positive_counts;  // per row
    bool distinct = false;                     // counts form a permutation of 0..m-1
};

/// Requires a non-negative generic matrix and k != l; throws ValidationError
/// otherwise.
SignPatternSignature sign_pattern_signature(const Matrix& a, std::size_t k, std::size_t l);

struct SignOrderingCheck {
    bool row_k_nonnegative = false;   // c(1) = k
    bool row_l_nonpositive = false;   // c(m) = l
};

/// For T_ij = |m_ij| (c_ik c_jl - c_jk c_il): row k must be >= 0 and row l
/// must be <= 0 (up to 1e-12 of the entry scale).
SignOrderingCheck sign_ordering_check(const MMatrixBundle& bundle, std::size_t k, std::size_t l);

} // namespace lipext
