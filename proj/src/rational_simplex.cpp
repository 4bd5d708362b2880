#include "lipext/rational_simplex.hpp"

#include "lipext/error.hpp"

namespace lipext {

namespace {

struct Tableau {
    std::vector<std::vector<mpq_class>> t;  // rows x (cols + 1), last column rhs
    std::vector<std::size_t> basis;
    std::size_t cols = 0;
    std::size_t pivots = 0;

    void pivot(std::size_t r, std::size_t c) {
        const mpq_class p = t[r][c];
        for (auto& v : t[r]) v /= p;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i == r || t[i][c] == 0) continue;
            const mpq_class f = t[i][c];
            for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
        }
        basis[r] = c;
        ++pivots;
    }

    /// Maximizes cost over the current basis. allowed[j] masks entering
    /// columns. Returns false if unbounded. Dantzig pricing, falling back to
    /// Bland's rule after a run of degenerate pivots so cycling cannot occur.
    bool optimize(const std::vector<mpq_class>& cost, const std::vector<bool>& allowed) {
        std::vector<mpq_class> d(cols);
        for (std::size_t j = 0; j < cols; ++j) {
            d[j] = cost[j];
            for (std::size_t i = 0; i < t.size(); ++i) d[j] -= cost[basis[i]] * t[i][j];
        }
        std::size_t degenerate = 0;
        bool bland = false;
        for (;;) {
            std::size_t enter = cols;
            for (std::size_t j = 0; j < cols; ++j) {
                if (!allowed[j] || d[j] <= 0) continue;
                if (enter == cols || (!bland && d[j] > d[enter])) enter = j;
                if (bland) break;
            }
            if (enter == cols) return true;
            std::size_t leave = t.size();
            mpq_class best;
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (t[i][enter] <= 0) continue;
                const mpq_class ratio = t[i][cols] / t[i][enter];
                if (leave == t.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == t.size()) return false;
            if (best == 0) {
                if (++degenerate > 50) bland = true;
            } else {
                degenerate = 0;
            }
            pivot(leave, enter);
            const mpq_class f = d[enter];
            for (std::size_t j = 0; j < cols; ++j) d[j] -= f * t[leave][j];
        }
    }
};

} // namespace

LpSolution maximize(const LinearProgram& lp) {
    const std::size_t m = lp.a.size();
    const std::size_t n = lp.c.size();
    if (lp.b.size() != m) throw ValidationError("LP has " + std::to_string(m) + " rows but " +
                                                std::to_string(lp.b.size()) + " right-hand sides");
    for (const auto& row : lp.a)
        if (row.size() != n) throw ValidationError("LP row length does not match the objective");

    std::size_t artificials = 0;
    for (const auto& v : lp.b)
        if (v < 0) ++artificials;

    // Columns: x (n), slacks (m), artificials.
    Tableau tab;
    tab.cols = n + m + artificials;
    tab.t.assign(m, std::vector<mpq_class>(tab.cols + 1));
    tab.basis.resize(m);
    std::size_t next_art = n + m;
    for (std::size_t i = 0; i < m; ++i) {
        const bool flip = lp.b[i] < 0;
        const int s = flip ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j) tab.t[i][j] = s * lp.a[i][j];
        tab.t[i][n + i] = s;
        tab.t[i][tab.cols] = s * lp.b[i];
        if (flip) {
            tab.t[i][next_art] = 1;
            tab.basis[i] = next_art++;
        } else {
            tab.basis[i] = n + i;
        }
    }

    LpSolution sol;
    std::vector<bool> allowed(tab.cols, true);
    if (artificials > 0) {
        std::vector<mpq_class> phase1(tab.cols);
        for (std::size_t j = n + m; j < tab.cols; ++j) phase1[j] = -1;
        tab.optimize(phase1, allowed);
        mpq_class infeas;
        for (std::size_t i = 0; i < m; ++i)
            if (tab.basis[i] >= n + m) infeas += tab.t[i][tab.cols];
        if (infeas != 0) {
            sol.pivots = tab.pivots;
            return sol;
        }
        // Drive zero-valued artificials out of the basis; drop redundant rows.
        for (std::size_t i = 0; i < tab.t.size();) {
            if (tab.basis[i] < n + m) {
                ++i;
                continue;
            }
            std::size_t c = n + m;
            for (std::size_t j = 0; j < n + m && c == n + m; ++j)
                if (tab.t[i][j] != 0) c = j;
            if (c == n + m) {
                tab.t.erase(tab.t.begin() + static_cast<std::ptrdiff_t>(i));
                tab.basis.erase(tab.basis.begin() + static_cast<std::ptrdiff_t>(i));
            } else {
                tab.pivot(i, c);
                ++i;
            }
        }
        for (std::size_t j = n + m; j < tab.cols; ++j) allowed[j] = false;
    }

    std::vector<mpq_class> cost(tab.cols);
    for (std::size_t j = 0; j < n; ++j) cost[j] = lp.c[j];
    if (!tab.optimize(cost, allowed)) {
        sol.status = LpStatus::unbounded;
        sol.pivots = tab.pivots;
        return sol;
    }
    sol.status = LpStatus::optimal;
    sol.x.assign(n, mpq_class(0));
    for (std::size_t i = 0; i < tab.t.size(); ++i)
        if (tab.basis[i] < n) sol.x[tab.basis[i]] = tab.t[i][tab.cols];
    for (std::size_t j = 0; j < n; ++j) sol.value += lp.c[j] * sol.x[j];
    sol.pivots = tab.pivots;
    return sol;
}

} // namespace lipext
