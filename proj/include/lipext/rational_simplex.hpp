#pragma once

#include <cstddef>
#include <vector>

#include <gmpxx.h>

namespace lipext {

/// maximize c^T x subject to A x <= b, x >= 0, in exact rational arithmetic.
struct LinearProgram {
    std::vector<std::vector<mpq_class>> a;
    std::vector<mpq_class> b;
    std::vector<mpq_class> c;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    mpq_class value;
    std::vector<mpq_class> x;
    std::size_t pivots = 0;
};

/// Two-phase tableau simplex. Dantzig pricing, switching to Bland's rule
/// after a run of degenerate pivots so it terminates on degenerate problems. Throws ValidationError on inconsistent shapes.
LpSolution maximize(const LinearProgram& lp);

} // namespace lipext
