#include <cmath>
#include <numeric>

#include "doctest.h"
#include "lipext/generators.hpp"
#include "lipext/kernels.hpp"
#include "lipext/metric_core.hpp"
#include "lipext/mmatrix.hpp"
#include "lipext/transforms.hpp"

using namespace lipext;

TEST_CASE("pairwise max: serial and parallel agree exactly") {
    Rng rng(1);
    for (std::size_t n : {0, 1, 2, 7, 60}) {
        std::vector<double> v(n);
        for (double& x : v) x = rng.uniform(-5, 5);
        auto ratio = [&](std::size_t i, std::size_t j) { return std::abs(v[i] - v[j]) / (1.0 + i + j); };
        CHECK(kernels::pairwise_max_serial(n, ratio) == kernels::pairwise_max_parallel(n, ratio));
    }
}

TEST_CASE("grid max: serial and parallel agree exactly") {
    const std::vector<double> xs = SampleGrid{}.points();
    auto g = [](double x) { return std::sin(x) / (1 + x); };
    CHECK(kernels::grid_max_serial(std::span<const double>(xs), g) ==
          kernels::grid_max_parallel(std::span<const double>(xs), g));
    const std::vector<double> empty;
    CHECK(std::isinf(kernels::grid_max_parallel(std::span<const double>(empty), g)));
}

TEST_CASE("first failure returns the smallest failing index") {
    for (std::size_t target : {0, 5, 999, 1000}) {
        auto fails = [&](std::size_t i) { return i >= target && i % 3 == target % 3; };
        CHECK(kernels::first_failure_serial(1000, fails) == kernels::first_failure_parallel(1000, fails));
    }
    CHECK_FALSE(kernels::first_failure_parallel(10, [](std::size_t) { return false; }).has_value());
}

TEST_CASE("map_indexed keeps index order") {
    auto sq = [](std::size_t i) { return static_cast<double>(i * i); };
    CHECK(kernels::map_indexed_serial<double>(100, sq) == kernels::map_indexed_parallel<double>(100, sq));
}

TEST_CASE("module kernels give identical results in both execution modes") {
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        const auto inst = random_extension_instance(rng, 14);
        const auto& target = inst.target;
        CHECK(lipschitz_constant(inst.f, inst.space, target, Execution::serial) ==
              lipschitz_constant(inst.f, inst.space, target, Execution::parallel));
    }
    for (int t = 0; t < 10; ++t) {
        Matrix a(5, 5);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j) a(i, j) = rng.index(3);  // many vanishing minors
        const auto s = is_generic(a, 1e-10, Execution::serial);
        const auto p = is_generic(a, 1e-10, Execution::parallel);
        CHECK(s.generic == p.generic);
        CHECK(s.minors_checked == p.minors_checked);
        CHECK(s.first_failure == p.first_failure);
    }
    const auto tbl = TransformFunction::table({0, 1, 5, 1e12}, {0, 1, 2, 1e8}, {true, true, true});
    for (double alpha : {1.5, 30.0, 1e4})
        CHECK(dilation_modulus(tbl, alpha, {}, Execution::serial) == dilation_modulus(tbl, alpha, {}, Execution::parallel));
}
