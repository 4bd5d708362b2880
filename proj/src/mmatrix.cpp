#include "lipext/mmatrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "lipext/error.hpp"
#include "lipext/kernels.hpp"

namespace lipext {

WeightFunction::WeightFunction(Matrix lambda) : lambda_(std::move(lambda)) {
    if (!lambda_.square()) throw ValidationError("weight matrix must be square");
    const std::size_t n = lambda_.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double w = lambda_(i, j);
            const std::string at = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
            if (!std::isfinite(w)) throw ValidationError("non-finite weight at " + at);
            if (w < 0.0) throw ValidationError("negative weight at " + at);
            if (i == j && w != 0.0) throw ValidationError("nonzero diagonal weight at " + at);
            if (w != lambda_(j, i)) throw ValidationError("asymmetric weight at " + at);
        }
    }
}

std::vector<std::size_t> complement(const std::vector<std::size_t>& subset, std::size_t n) {
    std::vector<bool> in(n, false);
    for (std::size_t i : subset) {
        if (i >= n) throw ValidationError("index " + std::to_string(i) + " out of range for n=" + std::to_string(n));
        in[i] = true;
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (!in[i]) out.push_back(i);
    return out;
}

std::string MatrixClassification::verdict() const {
    if (!square) return "not square";
    if (!invertible) return "not invertible";
    return is_m_matrix() ? "M-matrix" : "not an M-matrix";
}

namespace {

MatrixClassification classify(const Matrix& m, const Matrix* c) {
    MatrixClassification cls;
    cls.square = m.square();
    if (!cls.square) return cls;
    const std::size_t n = m.rows();
    cls.zero_tolerance = 1e-12 * m.max_abs();
    cls.symmetric = m.is_symmetric(cls.zero_tolerance);
    cls.off_diagonal_nonpositive = true;
    cls.strictly_diagonally_dominant = true;
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            off += std::abs(m(i, j));
            if (m(i, j) > cls.zero_tolerance) cls.off_diagonal_nonpositive = false;
        }
        if (!(std::abs(m(i, i)) > off)) cls.strictly_diagonally_dominant = false;
    }
    if (c != nullptr) {
        cls.invertible = true;
        const double ctol = 1e-12 * c->max_abs();
        cls.inverse_nonnegative = std::all_of(c->data().begin(), c->data().end(), [&](double v) { return v >= -ctol; });
    }
    return cls;
}

double inverse_residual(const Matrix& m, const Matrix& c) {
    const Matrix p = c * m;
    double r = 0.0;
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j) r = std::max(r, std::abs(p(i, j) - (i == j ? 1.0 : 0.0)));
    return r;
}

void check_pair(const MMatrixBundle& b, std::size_t k, std::size_t l) {
    const std::size_t n = b.m.rows();
    if (k >= n || l >= n) throw ValidationError("index out of range for m=" + std::to_string(n));
    if (k == l) throw ValidationError("indices k and l must be distinct");
}

void require_m_matrix(const MMatrixBundle& b, const char* op) {
    if (!b.flags.is_m_matrix()) throw ValidationError(std::string(op) + " needs an M-matrix bundle");
}

} // namespace

MatrixClassification is_m_matrix(const Matrix& m) {
    if (!m.square()) return classify(m, nullptr);
    try {
        const Matrix c = inverse(m);
        return classify(m, &c);
    } catch (const NumericalError&) {
        return classify(m, nullptr);
    }
}

MMatrixBundle make_bundle(Matrix m) {
    if (!m.square()) throw ValidationError("M-matrix bundle needs a square matrix");
    MMatrixBundle b;
    b.c = inverse(m);
    b.flags = classify(m, &b.c);
    b.inverse_residual = inverse_residual(m, b.c);
    b.m = std::move(m);
    return b;
}

MMatrixBundle build_m_matrix(const WeightFunction& lambda, const std::vector<std::size_t>& free_set) {
    const std::size_t n = lambda.size();
    std::vector<std::size_t> J = free_set;
    std::sort(J.begin(), J.end());
    if (std::adjacent_find(J.begin(), J.end()) != J.end()) throw ValidationError("free set has repeated indices");
    const std::vector<std::size_t> Jc = complement(J, n);
    if (J.empty() || Jc.empty()) throw ValidationError("free set J must be a nonempty proper subset");

    const std::size_t m = J.size();
    Matrix M(m, m);
    for (std::size_t a = 0; a < m; ++a) {
        double diag = 0.0;
        for (std::size_t k : Jc) diag += lambda(J[a], k);
        for (std::size_t b = 0; b < m; ++b) {
            diag += lambda(J[a], J[b]);
            if (a != b) M(a, b) = -lambda(J[a], J[b]);
        }
        M(a, a) = diag;
    }
    try {
        return make_bundle(std::move(M));
    } catch (const NumericalError&) {
        throw NumericalError("M(lambda, J) is singular: some free row has no anchor weight");
    }
}

MMatrixBundle tridiagonal_example(std::size_t m) {
    if (m < 2) throw ValidationError("tridiagonal example needs m >= 2");
    Matrix M(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        M(i, i) = 3.0;
        if (i + 1 < m) M(i, i + 1) = M(i + 1, i) = -1.0;
    }
    return make_bundle(std::move(M));
}

Theorem61Check theorem61_check(const MMatrixBundle& bundle, std::size_t k, std::size_t l) {
    check_pair(bundle, k, l);
    if (!bundle.flags.symmetric) throw ValidationError("theorem61_check needs a symmetric matrix");
    require_m_matrix(bundle, "theorem61_check");
    const Matrix& M = bundle.m;
    const Matrix& C = bundle.c;
    const std::size_t n = M.rows();
    Theorem61Check r;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s += std::abs(M(i, j)) * std::abs(C(i, k) * C(j, l) - C(j, k) * C(i, l));
    r.lhs = 0.5 * s;
    r.rhs = static_cast<double>(n - 1) * C(k, l);
    r.holds = r.lhs <= r.rhs * (1.0 + 1e-9) + 1e-12;
    return r;
}

double ZeroRowSumCheck::max_residual() const {
    double r = first_residual;
    for (double v : other_residuals) r = std::max(r, v);
    return r;
}

bool ZeroRowSumCheck::holds(double rel_tol) const { return max_residual() <= rel_tol * std::max(1.0, scale); }

ZeroRowSumCheck zero_row_sum_check(const MMatrixBundle& bundle, std::size_t k, std::size_t l) {
    check_pair(bundle, k, l);
    require_m_matrix(bundle, "zero_row_sum_check");
    const Matrix& M = bundle.m;
    const Matrix& C = bundle.c;
    const std::size_t n = M.rows();
    const double cmax = C.max_abs();
    ZeroRowSumCheck r;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0, row_abs = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            s += std::abs(M(i, j)) * (C(i, k) * C(j, l) - C(j, k) * C(i, l));
            row_abs += std::abs(M(i, j));
        }
        r.scale = std::max(r.scale, row_abs * cmax * cmax);
        if (i == k)
            r.first_residual = std::abs(s - C(k, l));
        else if (i != l)
            r.other_residuals.push_back(std::abs(s));
    }
    return r;
}

ZeroPatternCheck zero_pattern_check(const MMatrixBundle& bundle, std::size_t k, std::size_t l) {
    check_pair(bundle, k, l);
    require_m_matrix(bundle, "zero_pattern_check");
    const Matrix& M = bundle.m;
    const Matrix& C = bundle.c;
    const std::size_t n = M.rows();
    const double mtol = 1e-12 * M.max_abs();
    const double ctol = 1e-12 * C.max_abs();
    ZeroPatternCheck r;
    for (double v : M.data())
        if (std::abs(v) <= mtol) ++r.zero_entries;
    if (std::abs(C(k, l)) > ctol) return r;  // inapplicable

    r.row_or_column = r.row_or_row = true;
    for (std::size_t i = 0; i < n; ++i) {
        const bool mki_zero = std::abs(M(k, i)) <= mtol;
        r.row_or_column &= mki_zero || std::abs(C(i, l)) <= ctol;
        r.row_or_row &= mki_zero || std::abs(M(i, l)) <= mtol;
    }
    r.enough_zeros = r.zero_entries + 1 >= n;
    r.status = r.row_or_column && r.row_or_row && r.enough_zeros ? ZeroPatternCheck::Status::pass
                                                                   : ZeroPatternCheck::Status::fail;
    return r;
}

namespace {

std::vector<std::size_t> mask_indices(std::uint32_t mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; mask; ++i, mask >>= 1)
        if (mask & 1u) out.push_back(i);
    return out;
}

double hadamard_bound(const Matrix& a) {
    double b = 1.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (double v : a.row(i)) s += v * v;
        b *= std::sqrt(s);
    }
    return b;
}

} // namespace

GenericityCheck is_generic(const Matrix& a, double tol, Execution exec) {
    if (!a.square()) throw ValidationError("genericity test needs a square matrix");
    const std::size_t n = a.rows();
    if (n > 8) throw ValidationError("genericity test is limited to m <= 8, got m=" + std::to_string(n));

    // Minor enumeration order: size, then row mask, then column mask.
    std::vector<std::vector<std::uint32_t>> by_size(n + 1);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) by_size[std::popcount(mask)].push_back(mask);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> minors;
    for (std::size_t s = 1; s <= n; ++s)
        for (std::uint32_t r : by_size[s])
            for (std::uint32_t c : by_size[s]) minors.emplace_back(r, c);

    auto vanishes = [&](std::size_t idx) {
        const auto rows = mask_indices(minors[idx].first);
        const auto cols = mask_indices(minors[idx].second);
        const Matrix sub = a.select(rows, cols);
        const double bound = hadamard_bound(sub);
        return !(bound > 0.0) || !(std::abs(determinant(sub)) > tol * bound);
    };
    const auto first = exec == Execution::parallel ? kernels::first_failure_parallel(minors.size(), vanishes)
                                                   : kernels::first_failure_serial(minors.size(), vanishes);
    GenericityCheck r;
    r.minors_checked = first ? *first + 1 : minors.size();
    r.generic = !first.has_value();
    if (first) r.first_failure.emplace(mask_indices(minors[*first].first), mask_indices(minors[*first].second));
    return r;
}

double jacobi_residual(const Matrix& a, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    if (!a.square()) throw ValidationError("Jacobi identity needs a square matrix");
    if (rows.size() != cols.size()) throw ValidationError("Jacobi identity needs |I| = |J|");
    const std::size_t n = a.rows();
    const Matrix inv = inverse(a);
    const double lhs = std::abs(determinant(inv.select(rows, cols)) * determinant(a));
    // A[[m] \ J, [m] \ I]
    const double rhs = std::abs(determinant(a.select(complement(cols, n), complement(rows, n))));
    const double denom = std::max(lhs, rhs);
    return denom == 0.0 ? 0.0 : std::abs(lhs - rhs) / denom;
}

Matrix pair_minor_matrix(const Matrix& a, std::size_t k, std::size_t l) {
    if (!a.square() || k >= a.rows() || l >= a.rows()) throw ValidationError("pair-minor indices out of range");
    const std::size_t n = a.rows();
    Matrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = a(i, k) * a(j, l) - a(j, k) * a(i, l);
    return b;
}

SignPatternSignature sign_pattern_signature(const Matrix& a, std::size_t k, std::size_t l) {
    if (!a.square()) throw ValidationError("sign pattern needs a square matrix");
    if (k == l || k >= a.rows() || l >= a.rows()) throw ValidationError("sign pattern needs distinct in-range k, l");
    for (double v : a.data())
        if (v < 0.0) throw ValidationError("sign pattern needs a non-negative matrix");
    const GenericityCheck g = is_generic(a);
    if (!g.generic) throw ValidationError("sign pattern needs a generic matrix (a square minor vanishes)");

    const Matrix b = pair_minor_matrix(a, k, l);
    const std::size_t n = a.rows();
    SignPatternSignature sig;
    sig.positive_counts.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (b(i, j) > 0.0) ++sig.positive_counts[i];
    std::vector<std::size_t> sorted = sig.positive_counts;
    std::sort(sorted.begin(), sorted.end());
    sig.distinct = true;
    for (std::size_t i = 0; i < n; ++i) sig.distinct &= sorted[i] == i;
    return sig;
}

SignOrderingCheck sign_ordering_check(const MMatrixBundle& bundle, std::size_t k, std::size_t l) {
    check_pair(bundle, k, l);
    require_m_matrix(bundle, "sign_ordering_check");
    const Matrix& M = bundle.m;
    const Matrix& C = bundle.c;
    const std::size_t n = M.rows();
    const double cmax = C.max_abs();
    const double tol = 1e-12 * M.max_abs() * cmax * cmax;
    SignOrderingCheck r{true, true};
    for (std::size_t j = 0; j < n; ++j) {
        const double tkj = std::abs(M(k, j)) * (C(k, k) * C(j, l) - C(j, k) * C(k, l));
        const double tlj = std::abs(M(l, j)) * (C(l, k) * C(j, l) - C(j, k) * C(l, l));
        r.row_k_nonnegative &= tkj >= -tol;
        r.row_l_nonpositive &= tlj <= tol;
    }
    return r;
}

} // namespace lipext
