#include "doctest.h"
#include "lipext/error.hpp"
#include "lipext/random.hpp"
#include "lipext/rational_simplex.hpp"

using namespace lipext;

namespace {

LinearProgram lp(std::vector<std::vector<long>> a, std::vector<long> b, std::vector<long> c) {
    LinearProgram out;
    for (const auto& row : a) {
        std::vector<mpq_class> r;
        for (long v : row) r.emplace_back(v);
        out.a.push_back(std::move(r));
    }
    for (long v : b) out.b.emplace_back(v);
    for (long v : c) out.c.emplace_back(v);
    return out;
}

bool feasible(const LinearProgram& p, const std::vector<mpq_class>& x) {
    for (const auto& v : x)
        if (v < 0) return false;
    for (std::size_t i = 0; i < p.a.size(); ++i) {
        mpq_class s = 0;
        for (std::size_t j = 0; j < x.size(); ++j) s += p.a[i][j] * x[j];
        if (s > p.b[i]) return false;
    }
    return true;
}

} // namespace

TEST_CASE("textbook maximum") {
    // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
    const auto p = lp({{1, 0}, {0, 2}, {3, 2}}, {4, 12, 18}, {3, 5});
    const auto s = maximize(p);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.value == 36);
    CHECK(s.x[0] == 2);
    CHECK(s.x[1] == 6);
}

TEST_CASE("exact rational optimum") {
    // max x + y, 3x + y <= 2, x + 3y <= 2 -> 1 at (1/2, 1/2)
    const auto s = maximize(lp({{3, 1}, {1, 3}}, {2, 2}, {1, 1}));
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.value == 1);
    CHECK(s.x[0] == mpq_class(1, 2));
}

TEST_CASE("phase one handles negative right-hand sides") {
    // x + y >= 2 written as -x - y <= -2; max -x - 2y -> -2 at (2, 0)
    const auto p = lp({{-1, -1}, {1, 0}, {0, 1}}, {-2, 5, 5}, {-1, -2});
    const auto s = maximize(p);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.value == -2);
    CHECK(feasible(p, s.x));
}

TEST_CASE("infeasible and unbounded") {
    CHECK(maximize(lp({{1}, {-1}}, {1, -2}, {1})).status == LpStatus::infeasible);
    CHECK(maximize(lp({{1, -1}}, {1}, {1, 0})).status == LpStatus::unbounded);
}

TEST_CASE("degenerate problems terminate") {
    // Beale's cycling example under textbook Dantzig pricing
    LinearProgram p;
    p.a = {{mpq_class(1, 4), -8, -1, 9}, {mpq_class(1, 2), -12, mpq_class(-1, 2), 3}, {0, 0, 1, 0}};
    p.b = {0, 0, 1};
    p.c = {mpq_class(3, 4), -20, mpq_class(1, 2), -6};
    const auto s = maximize(p);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.value == mpq_class(5, 4));
}

TEST_CASE("redundant equality rows are dropped") {
    // x + y <= 1, -x - y <= -1 (forces x + y = 1), duplicated
    const auto p = lp({{1, 1}, {-1, -1}, {-1, -1}}, {1, -1, -1}, {2, 1});
    const auto s = maximize(p);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.value == 2);
}

TEST_CASE("shape errors") {
    LinearProgram bad = lp({{1, 2}}, {1}, {1});
    CHECK_THROWS_AS(maximize(bad), ValidationError);
    bad = lp({{1}}, {1, 2}, {1});
    CHECK_THROWS_AS(maximize(bad), ValidationError);
}

TEST_CASE("random LPs: optimum beats every sampled feasible point") {
    Rng rng(17);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 1 + rng.index(4), m = 1 + rng.index(4);
        std::vector<std::vector<long>> a(m, std::vector<long>(n));
        std::vector<long> b(m), c(n);
        for (auto& row : a)
            for (long& v : row) v = static_cast<long>(rng.index(7)) - 2;
        for (long& v : b) v = static_cast<long>(rng.index(6));
        for (long& v : c) v = static_cast<long>(rng.index(7)) - 3;
        const auto p = lp(a, b, c);
        const auto s = maximize(p);
        CHECK(s.status != LpStatus::infeasible);  // x = 0 is feasible since b >= 0
        if (s.status != LpStatus::optimal) continue;
        CHECK(feasible(p, s.x));
        mpq_class check = 0;
        for (std::size_t j = 0; j < n; ++j) check += p.c[j] * s.x[j];
        CHECK(check == s.value);
        // integer grid points 0..3 that are feasible never exceed the optimum
        std::vector<mpq_class> x(n, 0);
        for (std::size_t code = 0; code < (std::size_t{1} << (2 * n)); ++code) {
            mpq_class val = 0;
            for (std::size_t j = 0; j < n; ++j) {
                x[j] = static_cast<long>((code >> (2 * j)) & 3U);
                val += p.c[j] * x[j];
            }
            if (feasible(p, x)) CHECK(val <= s.value);
        }
    }
}
