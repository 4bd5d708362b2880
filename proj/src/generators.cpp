#include "lipext/generators.hpp"

#include <algorithm>
#include <numeric>

namespace lipext {

std::vector<std::size_t> random_subset(Rng& rng, std::size_t n, std::size_t size) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (std::size_t i = 0; i < size && i < n; ++i) std::swap(all[i], all[i + rng.index(n - i)]);
    all.resize(std::min(size, n));
    std::sort(all.begin(), all.end());
    return all;
}

MetricSpace random_metric_space(Rng& rng, std::size_t n) {
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d(i, j) = d(j, i) = rng.uniform(0.5, 5.0);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
    return make_metric(std::move(d));
}

ExtensionInstance random_extension_instance(Rng& rng, std::size_t n_max) {
    const std::size_t n = 2 + rng.index(n_max - 1);
    std::vector<std::size_t> s;
    while (s.empty())
        for (std::size_t i = 0; i < n; ++i)
            if (rng.coin()) s.push_back(i);
    const std::size_t y = 1 + rng.index(6);
    MetricSpace target = random_metric_space(rng, y);
    std::vector<std::size_t> images(s.size());
    for (auto& v : images) v = rng.index(y);
    MetricSpace space = random_metric_space(rng, n);
    return ExtensionInstance{std::move(space), PointMap(std::move(s), std::move(images)), TargetSpace(target), 0.0};
}

MMatrixBundle random_m_bundle(Rng& rng, std::size_t m_min, std::size_t m_max) {
    const std::size_t m = m_min + rng.index(m_max - m_min + 1);
    const std::size_t anchors = 1 + rng.index(3);
    const std::size_t n = m + anchors;
    Matrix lambda(n, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = rng.coin(0.3) ? 0.0 : rng.uniform(0.0, 2.0);
            lambda(i, j) = lambda(j, i) = v;
        }
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t k = m; k < n; ++k) s += lambda(i, k);
        if (s < 0.1) {
            const std::size_t k = m + rng.index(anchors);
            lambda(i, k) = lambda(k, i) = lambda(i, k) + rng.uniform(0.1, 2.0);
        }
    }
    std::vector<std::size_t> J(m);
    std::iota(J.begin(), J.end(), std::size_t{0});
    return build_m_matrix(WeightFunction(std::move(lambda)), J);
}

Matrix random_generic_nonnegative(Rng& rng, std::size_t m) {
    for (;;) {
        Matrix a(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) a(i, j) = rng.uniform(0.1, 1.0);
        if (is_generic(a, 1e-10, Execution::serial).generic) return a;
    }
}

Matrix random_invertible(Rng& rng, std::size_t m) {
    for (;;) {
        Matrix a(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
        const LuFactorization lu = lu_factor(a);
        if (lu.singular) continue;
        if (a.max_abs() * inverse(a).max_abs() <= 1e3) return a;
    }
}

ExtensionProblem random_one_point_problem(Rng& rng, std::size_t s_count, std::size_t source_dim,
                                          std::size_t target_dim, Norm target) {
    std::vector<Point> pts(s_count + 1, Point(source_dim));
    for (auto& p : pts)
        for (double& c : p) c = rng.uniform(-1.0, 1.0);
    std::vector<Point> images(s_count, Point(target_dim));
    for (auto& p : images)
        for (double& c : p) c = rng.uniform(-1.0, 1.0);
    std::vector<std::size_t> s(s_count);
    std::iota(s.begin(), s.end(), std::size_t{0});
    return ExtensionProblem(EuclideanPointSet(std::move(pts)), std::move(s), std::move(images), {s_count}, target);
}

} // namespace lipext
