#pragma once

#include <cstddef>
#include <vector>

#include "lipext/metric_core.hpp"
#include "lipext/mmatrix.hpp"
#include "lipext/random.hpp"

namespace lipext {

/// Phi(z) = sum over ordered pairs (k, l) of lambda(k, l) ||z(k) - z(l)||^2,
/// minimized over z with z = x off the free set J.
///
/// Invariants (checked by the constructor):
///   * lambda vanishes on J^c x J^c,
///   * every free row has positive anchor weight sum_{k in J^c} lambda(i, k),
///   * J is a nonempty proper subset of I.
class QuadInstance {
public:
    QuadInstance(EuclideanPointSet points, WeightFunction weights, std::vector<std::size_t> free_set);

    std::size_t size() const noexcept { return points_.size(); }
    std::size_t dimension() const noexcept { return points_.dimension(); }
    const EuclideanPointSet& points() const noexcept { return points_; }
    const WeightFunction& weights() const noexcept { return weights_; }
    const std::vector<std::size_t>& free_set() const noexcept { return free_; }     // J, ascending
    const std::vector<std::size_t>& anchor_set() const noexcept { return anchors_; }  // J^c, ascending

private:
    EuclideanPointSet points_;
    WeightFunction weights_;
    std::vector<std::size_t> free_;
    std::vector<std::size_t> anchors_;
};

/// Phi for a full assignment z: I -> R^d (z.size() == instance.size()).
double phi_value(const QuadInstance& instance, const std::vector<Point>& z);

/// sum_{i,j in J} sum_{k,l in J^c} lambda_ik c_ij lambda_jl ||x(k) - x(l)||^2
/// with C = M(lambda, J)^{-1}.
double closed_form_minimum(const QuadInstance& instance);

struct OracleResult {
    double value = 0.0;              // linear-solve route
    std::vector<Point> argmin;       // full assignment, z = x on J^c
    double descent_value = 0.0;      // gradient-descent route
    std::size_t descent_iterations = 0;
    bool descent_converged = false;  // gradient norm < 1e-10 within the cap
    bool routes_agree = false;       // |a - b| <= 1e-6 (1 + |a|)
};

struct DescentConfig {
    double gradient_tolerance = 1e-10;
    std::size_t max_iterations = 1'000'000;
};

/// Two independent minimizations of Phi: (a) Cholesky solve of the
/// stationarity system M p_t = r_t per coordinate, valued by the
/// expanded quadratic; (b) gradient descent on the free points from the
/// anchor barycenter with step 1 / (4 max row sum of lambda).
OracleResult oracle_minimum(const QuadInstance& instance, const DescentConfig& config = {});

/// |sum_j c_ij sum_{k in J^c} lambda_jk - 1| for each free row i.
std::vector<double> sum_to_one_check(const QuadInstance& instance);

/// Random instance for property suites: weights in [0, 2], zero on J^c x J^c,
/// each free row's anchor weight at least 0.1.
QuadInstance random_quad_instance(Rng& rng, std::size_t free_count, std::size_t anchor_count,
                                  std::size_t dimension);

} // namespace lipext
