#pragma once

// Data-parallel inner loops shared by the modules. Each kernel has a serial
// reference twin with identical semantics; the parallel versions reduce with
// exact max/min, so their results do not depend on the thread count.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lipext::kernels {

/// max over unordered pairs i < j of ratio(i, j); 0 for n < 2.
template <class Ratio>
double pairwise_max_serial(std::size_t n, Ratio&& ratio) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) best = std::max(best, ratio(i, j));
    return best;
}

template <class Ratio>
double pairwise_max_parallel(std::size_t n, Ratio&& ratio) {
    double best = 0.0;
    const std::int64_t count = static_cast<std::int64_t>(n);
#pragma omp parallel for reduction(max : best) schedule(dynamic, 4)
    for (std::int64_t i = 0; i < count; ++i)
        for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j)
            best = std::max(best, ratio(static_cast<std::size_t>(i), j));
    return best;
}

/// max over sample points x of g(x); -inf for an empty grid.
template <class G>
double grid_max_serial(std::span<const double> xs, G&& g) {
    double best = -std::numeric_limits<double>::infinity();
    for (double x : xs) best = std::max(best, g(x));
    return best;
}

template <class G>
double grid_max_parallel(std::span<const double> xs, G&& g) {
    double best = -std::numeric_limits<double>::infinity();
    const std::int64_t count = static_cast<std::int64_t>(xs.size());
#pragma omp parallel for reduction(max : best) schedule(static)
    for (std::int64_t i = 0; i < count; ++i) best = std::max(best, g(xs[static_cast<std::size_t>(i)]));
    return best;
}

/// Smallest index in [0, count) with fails(index) true.
template <class Pred>
std::optional<std::size_t> first_failure_serial(std::size_t count, Pred&& fails) {
    for (std::size_t i = 0; i < count; ++i)
        if (fails(i)) return i;
    return std::nullopt;
}

template <class Pred>
std::optional<std::size_t> first_failure_parallel(std::size_t count, Pred&& fails) {
    std::size_t first = count;
    const std::int64_t n = static_cast<std::int64_t>(count);
#pragma omp parallel for reduction(min : first) schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if (idx < first && fails(idx)) first = std::min(first, idx);
    }
    if (first == count) return std::nullopt;
    return first;
}

/// out[i] = fn(i); results are stored by index so ordering is fixed.
template <class T, class Fn>
std::vector<T> map_indexed_serial(std::size_t count, Fn&& fn) {
    std::vector<T> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
}

template <class T, class Fn>
std::vector<T> map_indexed_parallel(std::size_t count, Fn&& fn) {
    std::vector<T> out(count);
    const std::int64_t n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    return out;
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace lipext::kernels
