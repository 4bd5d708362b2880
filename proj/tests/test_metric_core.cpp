#include <cmath>
#include <limits>

#include "doctest.h"
#include "lipext/error.hpp"
#include "lipext/hilbert_extension.hpp"
#include "lipext/io.hpp"
#include "lipext/metric_core.hpp"
#include "lipext/random.hpp"
#include "lipext/transforms.hpp"
#include "test_support.hpp"

using namespace lipext;
using lipext::test::close;
using lipext::test::error_message;

TEST_CASE("make_quasi_metric accepts and rejects by first entry") {
    const auto two = make_quasi_metric(Matrix{{0, 1}, {1, 0}});
    CHECK(two.size() == 2);
    CHECK(two(0, 1) == 1.0);

    CHECK(error_message<ValidationError>([] { make_quasi_metric(Matrix{{0, -1}, {-1, 0}}); }) ==
          "negative distance at (0,1)");
    CHECK_THROWS_AS(make_quasi_metric(Matrix{{0, 1}, {2, 0}}), ValidationError);
    CHECK_THROWS_AS(make_quasi_metric(Matrix{{1, 1}, {1, 0}}), ValidationError);
    CHECK_THROWS_AS(make_quasi_metric(Matrix(2, 3)), ValidationError);

    const auto quasi = make_quasi_metric(Matrix{{0, 2, 5}, {2, 0, 1}, {5, 1, 0}});
    CHECK(quasi(0, 2) == 5.0);
    CHECK_THROWS_AS(make_metric(quasi), ValidationError);
}

TEST_CASE("validate_metric reports the broken triangle") {
    CHECK(validate_metric(path_space(2)).empty());
    const auto v = validate_metric(make_quasi_metric(Matrix{{0, 2, 5}, {2, 0, 1}, {5, 1, 0}}));
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == MetricViolation::Kind::triangle);
    CHECK(v[0].i == 0);
    CHECK(v[0].j == 2);
    CHECK(v[0].via == 1);
    CHECK(v[0].excess == doctest::Approx(2.0));

    const auto zero = validate_metric(make_quasi_metric(Matrix{{0, 0}, {0, 0}}));
    REQUIRE(zero.size() == 1);
    CHECK(zero[0].kind == MetricViolation::Kind::zero_distance);
}

TEST_CASE("F-transform of a metric by a concave increasing F stays a metric") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3 + rng.index(6);
        Matrix d(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) d(i, j) = d(j, i) = rng.uniform(1.0, 2.0);
        const auto space = make_metric(d);  // weights in [1, 2] always satisfy the triangle inequality
        for (double theta : {0.25, 0.5, 1.0})
            CHECK(validate_metric(apply_transform(TransformFunction::power(theta), space)).empty());
    }
}

TEST_CASE("path_space") {
    CHECK(path_space(1).size() == 2);
    CHECK(path_space(1)(0, 1) == 1.0);
    CHECK(path_space(3)(0, 3) == 3.0);
    const auto p5 = path_space(5);
    CHECK(p5.size() == 6);
    CHECK(p5(2, 5) == 3.0);
    CHECK_THROWS_AS(path_space(0), ValidationError);
    for (std::size_t n = 1; n <= 64; ++n) CHECK(validate_metric(path_space(n)).empty());
}

TEST_CASE("lp_distance examples") {
    const Point u{1, 1, 1}, v{-1, 1, -1};
    CHECK(lp_distance(u, v, Norm::lp(1)) == 4.0);
    CHECK(close(lp_distance(u, v, Norm::euclidean()), 2.0 * std::sqrt(2.0)));
    CHECK(lp_distance(u, v, Norm::infinity()) == 2.0);
    CHECK_THROWS_AS(lp_distance(Point{1, 2}, Point{1}, Norm::euclidean()), ValidationError);
}

TEST_CASE("Norm parsing keeps infinity distinct") {
    CHECK(Norm::parse("inf").is_infinite());
    CHECK(Norm::parse("infinity").is_infinite());
    CHECK(Norm::parse("max").is_infinite());
    CHECK_FALSE(Norm::parse("1e300").is_infinite());
    CHECK(Norm::parse("1.5").p() == 1.5);
    CHECK_THROWS_AS(Norm::parse("0.5"), ValidationError);
    CHECK_THROWS_AS(Norm::parse("two"), ValidationError);
    CHECK(Norm::lp(3).inverse_conjugate() == doctest::Approx(2.0 / 3.0));
    CHECK(Norm::infinity().inverse_conjugate() == 1.0);
}

TEST_CASE("lp_distance triangle inequality and norm monotonicity") {
    Rng rng(2);
    const Norm norms[] = {Norm::lp(1), Norm::lp(1.5), Norm::euclidean(), Norm::lp(3), Norm::infinity()};
    std::size_t violations = 0, monotone_violations = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t d = 1 + rng.index(5);
        Point a(d), b(d), c(d);
        for (std::size_t t = 0; t < d; ++t) {
            a[t] = rng.uniform(-3, 3);
            b[t] = rng.uniform(-3, 3);
            c[t] = rng.uniform(-3, 3);
        }
        double prev = std::numeric_limits<double>::infinity();
        for (const Norm& p : norms) {
            const double ac = lp_distance(a, c, p);
            if (ac > (lp_distance(a, b, p) + lp_distance(b, c, p)) * (1 + 1e-12)) ++violations;
            if (ac > prev * (1 + 1e-12)) ++monotone_violations;
            prev = ac;
        }
    }
    CHECK(violations == 0);
    CHECK(monotone_violations == 0);
}

TEST_CASE("lipschitz_constant examples") {
    const auto p = path_space(5);
    const PointMap id({0, 5}, PointMap::IndexImages{0, 5});
    CHECK(lipschitz_constant(id, p, QuasiMetricSpace(p)) == 1.0);

    const PointMap constant({0, 2, 4}, PointMap::IndexImages{1, 1, 1});
    CHECK(lipschitz_constant(constant, p, QuasiMetricSpace(p)) == 0.0);

    const PointMap single({3}, PointMap::IndexImages{0});
    CHECK(lipschitz_constant(single, p, QuasiMetricSpace(p)) == 0.0);

    const WalshInstance w = walsh_instance(2, Norm::euclidean());
    const EuclideanPointSet cols(w.columns);
    const auto src = make_quasi_metric(distance_matrix(cols, Norm::euclidean()));
    const PointMap f({0, 1, 2, 3}, w.columns);
    CHECK(close(lipschitz_constant(f, src, Norm::lp(1)), std::sqrt(2.0)));
}

TEST_CASE("lipschitz_constant is infinite across a zero-distance pair") {
    const auto q = make_quasi_metric(Matrix{{0, 0}, {0, 0}});
    const PointMap f({0, 1}, PointMap::IndexImages{0, 1});
    const auto target = make_quasi_metric(Matrix{{0, 1}, {1, 0}});
    CHECK_THROWS_AS(lipschitz_constant(f, q, target), InfiniteLipschitzError);
    const PointMap same({0, 1}, PointMap::IndexImages{0, 0});
    CHECK(lipschitz_constant(same, q, target) == 0.0);
}

TEST_CASE("lipschitz_constant rejects bad maps") {
    const auto p = path_space(3);
    CHECK_THROWS_AS(PointMap({0, 0}, PointMap::IndexImages{0, 1}), ValidationError);
    CHECK_THROWS_AS(PointMap({0, 1}, PointMap::IndexImages{0}), ValidationError);
    const PointMap out({0, 9}, PointMap::IndexImages{0, 1});
    CHECK(error_message<ValidationError>([&] { lipschitz_constant(out, p, QuasiMetricSpace(p)); }) ==
          "index 9 out of range for n=4");
    const PointMap coords({0, 1}, PointMap::CoordinateImages{{0.0}, {1.0}});
    CHECK_THROWS_AS(lipschitz_constant(coords, p, QuasiMetricSpace(p)), ValidationError);
}

TEST_CASE("composition with a C-Lipschitz post-map scales Lip by at most C") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.index(8), d = 1 + rng.index(3);
        std::vector<Point> pts(n, Point(d)), img(n, Point(d));
        for (auto& p : pts)
            for (double& x : p) x = rng.uniform(-1, 1);
        for (auto& p : img)
            for (double& x : p) x = rng.uniform(-1, 1);
        const auto src = make_quasi_metric(distance_matrix(EuclideanPointSet(pts), Norm::euclidean()));
        std::vector<std::size_t> dom(n);
        for (std::size_t i = 0; i < n; ++i) dom[i] = i;
        const double c = rng.uniform(0.1, 3.0);
        std::vector<Point> scaled = img;
        for (auto& p : scaled)
            for (double& x : p) x *= c;  // g(y) = c y is c-Lipschitz
        const double lip = lipschitz_constant(PointMap(dom, img), src, Norm::euclidean());
        const double lip_g = lipschitz_constant(PointMap(dom, scaled), src, Norm::euclidean());
        CHECK(lip_g <= c * lip * (1 + 1e-12));
    }
}

TEST_CASE("approx_equal uses relative and absolute tolerances") {
    CHECK(approx_equal(1.0, 1.0 + 1e-10));
    CHECK_FALSE(approx_equal(1.0, 1.0 + 1e-8));
    CHECK(approx_equal(0.0, 1e-13));
    CHECK_FALSE(approx_equal(0.0, 1e-11));
}

TEST_CASE("matrix I/O round-trips bit-exactly") {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.index(6);
        Matrix d(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) d(i, j) = d(j, i) = rng.uniform(0, 10) * std::pow(10.0, rng.uniform(-8, 8));
        const auto space = make_quasi_metric(d);
        const auto back = io::space_from_json(io::json::parse(io::space_to_json(space).dump()));
        CHECK(back.distances() == d);
        CHECK(io::matrix_from_csv(io::matrix_to_csv(d)) == d);
    }
    for (double x : {0.1, 1.0 / 3.0, 5e-324, 1.7976931348623157e308, -2.5, 0.0})
        CHECK(io::parse_double(io::format_double(x)) == x);
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(4.0) == "4");
    CHECK_THROWS_AS(io::parse_double("1.0x"), ValidationError);
    CHECK_THROWS_AS(io::matrix_from_csv("0,1\n1"), ValidationError);
    CHECK_THROWS_AS(io::space_from_json(io::json::parse(R"({"n": 3, "dist": [[0,1],[1,0]]})")), ValidationError);
}

TEST_CASE("LU, inverse and Cholesky") {
    const Matrix a{{4, 2, 0}, {2, 5, 1}, {0, 1, 3}};
    CHECK(determinant(a) == doctest::Approx(4 * 14 - 2 * 6));
    const Matrix c = inverse(a);
    const Matrix prod = a * c;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(prod(i, j) - (i == j ? 1.0 : 0.0)) < 1e-14);
    const Matrix l = cholesky_factor(a);
    const Matrix llt = l * l.transpose();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(llt(i, j) == doctest::Approx(a(i, j)));
    const std::vector<double> b{1, 2, 3};
    const auto x = cholesky_solve(l, b);
    const auto ax = a * std::span<const double>(x);
    for (std::size_t i = 0; i < 3; ++i) CHECK(ax[i] == doctest::Approx(b[i]));
    CHECK_THROWS_AS(inverse(Matrix{{1, 2}, {2, 4}}), NumericalError);
    CHECK_THROWS_AS(cholesky_factor(Matrix{{1, 2}, {2, 1}}), NumericalError);
    CHECK(determinant(Matrix{{0, 1}, {1, 0}}) == -1.0);
}
