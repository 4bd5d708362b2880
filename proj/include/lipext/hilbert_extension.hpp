#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lipext/execution.hpp"
#include "lipext/matrix.hpp"
#include "lipext/metric_core.hpp"
#include "lipext/transforms.hpp"

namespace lipext {

/// W_0 = [1], W_{k+1} = [[W_k, W_k], [W_k, -W_k]]. Requires k <= 10.
Matrix walsh_matrix(std::size_t k);

/// The 2^k columns of W_k with its first row deleted, as points of
/// R^(2^k - 1). `p` is the source norm the instance is measured in.
struct WalshInstance {
    std::size_t k = 0;
    Norm p = Norm::euclidean();
    std::vector<Point> columns;
};

/// Requires 1 <= k <= 10. Verifies the +-1 entries, the zero column sum and
/// pairwise orthogonality; a violation throws NumericalError.
WalshInstance walsh_instance(std::size_t k, Norm p);

/// (2^(k-1))^(1/p*).
double walsh_lip(std::size_t k, Norm p);

/// (2 - 2^(1-k))^(1/p*), the ratio no extension to the origin can beat.
double walsh_lower_bound(std::size_t k, Norm p);

/// Points X = S u T in R^d with distances F(||x_i - x_j||_source), images
/// f(S) in l_p. Every point belongs to exactly one of S, T.
class ExtensionProblem {
public:
    ExtensionProblem(EuclideanPointSet points, std::vector<std::size_t> s, std::vector<Point> images,
                     std::vector<std::size_t> t, Norm target, std::optional<TransformFunction> transform = {},
                     Norm source = Norm::euclidean());

    const EuclideanPointSet& points() const noexcept { return points_; }
    const std::vector<std::size_t>& s() const noexcept { return s_; }
    const std::vector<Point>& images() const noexcept { return images_; }
    const std::vector<std::size_t>& t() const noexcept { return t_; }
    Norm target() const noexcept { return target_; }
    Norm source() const noexcept { return source_; }
    const std::optional<TransformFunction>& transform() const noexcept { return transform_; }
    std::size_t m() const noexcept { return t_.size(); }
    std::size_t image_dimension() const noexcept { return images_.front().size(); }

    /// Source distance d(i, j) after the transform.
    double distance(std::size_t i, std::size_t j) const { return dist_(i, j); }
    const QuasiMetricSpace& source_space() const noexcept { return space_; }
    /// Lip(f) on S under the transformed source metric.
    double lip_f() const noexcept { return lip_f_; }

private:
    EuclideanPointSet points_;
    std::vector<std::size_t> s_;
    std::vector<Point> images_;
    std::vector<std::size_t> t_;
    Norm target_;
    std::optional<TransformFunction> transform_;
    Norm source_;
    Matrix dist_;
    QuasiMetricSpace space_;
    double lip_f_ = 0.0;
};

/// The Walsh columns mapped to themselves, with the origin added as the
/// single new point (last index). Target l_1.
ExtensionProblem walsh_problem(std::size_t k, Norm source_p);

struct SolverConfig {
    double tolerance = 1e-5;                 // on the objective L
    std::size_t max_iterations = 200'000;    // per restart
    std::size_t restarts = 5;
    std::size_t refresh_interval = 500;      // iterations before the Polyak gap shrinks
    double jitter = 0.1;                     // restart radius, fraction of diam(Im f)
    std::size_t certificate_directions = 200;
    std::uint64_t seed = 0;
    Execution exec = Execution::parallel;
};

/// One ratio constraint. `j` is a T index for new-new pairs, an S index
/// otherwise.
struct ConstraintSlack {
    bool both_new = false;
    std::size_t i = 0;  // T index (position in problem.t())
    std::size_t j = 0;
    double value = 0.0;  // ratio at the solution
    double slack = 0.0;  // optimal_lip - value
};

struct SolverCertificate {
    std::vector<ConstraintSlack> slacks;
    std::size_t active = 0;
    /// min over sampled unit directions h of the largest one-sided
    /// derivative of an active constraint, scaled by diam(Im f) / L.
    double worst_direction = 0.0;
    bool certified = false;
};

struct SolveResult {
    std::vector<Point> extension_values;  // w_i, aligned with problem.t()
    double optimal_lip = 0.0;             // max(Lip(f), objective at w)
    double objective = 0.0;               // max over the (z, .) constraints
    std::size_t iterations = 0;           // summed over restarts
    std::size_t best_restart = 0;
    bool cap_hit = false;                 // the winning restart exhausted its cap
    SolverCertificate certificate;
};

/// Objective at a candidate w (aligned with problem.t()); 0 when m = 0.
double extension_objective(const ExtensionProblem& problem, const std::vector<Point>& w);

/// Minimizes the objective by Polyak-step subgradient descent with
/// restarts. The winning point is moved onto Conv(Im f) when that does not
/// raise the objective.
SolveResult solve_min_lipschitz_extension(const ExtensionProblem& problem, const SolverConfig& config = {});

struct BoundsReport {
    std::size_t m = 0;
    double lip_f = 0.0;
    double optimal_lip = 0.0;
    double ratio = 1.0;               // optimal_lip / Lip(f); 1 when Lip(f) = 0
    double upper_factor = 0.0;        // D_F(sqrt(m + 1))
    bool upper_ok = false;
    std::optional<double> lower_factor;
    bool lower_ok = true;
    bool passed = false;
};

/// F is the problem's transform (identity when absent). `lower_factor`
/// adds the lower-bound check, e.g. walsh_lower_bound for Walsh problems.
BoundsReport verify_bounds(const ExtensionProblem& problem, const SolveResult& result,
                           std::optional<double> lower_factor = {});

struct Lemma42Certificate {
    std::size_t k = 0;
    std::size_t orthants = 0;
    std::size_t feasible_orthants = 0;
    double max_l1 = 0.0;  // exact rational maximum, converted
    bool exact_zero = false;
    std::size_t pivots = 0;
};

/// max ||w||_1 subject to ||v_l - w||_1 <= ||v_l||_1 for all Walsh columns,
/// one exact LP per sign orthant. Requires 1 <= k <= 3.
Lemma42Certificate lemma42_certificate(std::size_t k);

} // namespace lipext
