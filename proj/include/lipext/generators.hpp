#pragma once
// Seeded random instances shared by the acceptance suite, the property
// tests and the benchmarks. Every generator consumes only the Rng it is
// given, so a seed fixes the instance on every platform.

#include <cstddef>
#include <vector>

#include "lipext/forest_extension.hpp"
#include "lipext/hilbert_extension.hpp"
#include "lipext/mmatrix.hpp"
#include "lipext/random.hpp"

namespace lipext {

/// Sorted random subset of {0, ..., n-1} with exactly `size` elements.
std::vector<std::size_t> random_subset(Rng& rng, std::size_t n, std::size_t size);

/// Shortest-path metric of a complete graph with edge weights in [0.5, 5].
MetricSpace random_metric_space(Rng& rng, std::size_t n);

/// n in [2, n_max], random nonempty S (possibly all of X), f into a random
/// target metric space with 1..6 points, epsilon 0.
ExtensionInstance random_extension_instance(Rng& rng, std::size_t n_max);

/// M(lambda, J) with |J| in [m_min, m_max] and 1..3 anchors. Each free row
/// has anchor weight >= 0.1, so the matrix is strictly dominant.
MMatrixBundle random_m_bundle(Rng& rng, std::size_t m_min, std::size_t m_max);

/// Entries in [0.1, 1], redrawn until is_generic accepts the sample.
Matrix random_generic_nonnegative(Rng& rng, std::size_t m);

/// Entries in [-1, 1], redrawn until max|A| max|A^-1| <= 1e3.
Matrix random_invertible(Rng& rng, std::size_t m);

/// One new point (last index) among `s_count` constraint points in
/// R^source_dim, images in R^target_dim.
ExtensionProblem random_one_point_problem(Rng& rng, std::size_t s_count, std::size_t source_dim,
                                          std::size_t target_dim, Norm target);

} // namespace lipext
