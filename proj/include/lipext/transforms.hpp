#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lipext/metric_core.hpp"

namespace lipext {

/// Scalar map F: [0, inf) -> [0, inf) with F(0) = 0, plus the properties
/// its constructor declares. Flags are trusted by the algorithms; use
/// check_declared_flags to look for evidence against them.
class TransformFunction {
public:
    enum class Family { identity, power, saturating, table };

    struct Flags {
        bool subadditive = false;
        bool strictly_increasing = false;
        bool concave_in_sqrt = false;  // x -> F(sqrt(x)) is concave
    };

    static TransformFunction identity();
    /// x^theta, theta > 0. Subadditive iff theta <= 1, F(sqrt .) concave iff theta <= 2.
    static TransformFunction power(double theta);
    /// F_a: 0 at 0, a elsewhere (a >= 0).
    static TransformFunction saturating(double a);
    /// Piecewise-linear through (xs[i], ys[i]); xs strictly increasing,
    /// xs[0] = 0 and ys[0] = 0. Evaluation outside [0, xs.back()] throws.
    static TransformFunction table(std::vector<double> xs, std::vector<double> ys, Flags flags);
    /// "identity", "power:0.5", "saturating:2".
    static TransformFunction parse(std::string_view spec);

    double operator()(double x) const;

    Family family() const noexcept { return family_; }
    const Flags& flags() const noexcept { return flags_; }
    /// theta for power, a for saturating, 0 otherwise.
    double parameter() const noexcept { return param_; }
    /// Largest argument the function accepts (infinity except for tables).
    double domain_max() const noexcept;
    std::string describe() const;

private:
    TransformFunction(Family family, double param, Flags flags) : family_(family), param_(param), flags_(flags) {}
    Family family_ = Family::identity;
    double param_ = 0.0;
    Flags flags_{};
    std::vector<double> xs_, ys_;
};

/// Log-spaced sample points x in [x_min, x_max].
struct SampleGrid {
    double x_min = 1e-6;
    double x_max = 1e6;
    std::size_t samples = 4096;

    std::vector<double> points() const;
};

/// dist'(i,j) = F(dist(i,j)). Throws ValidationError when F is undefined at
/// a required distance.
QuasiMetricSpace apply_transform(const TransformFunction& f, const QuasiMetricSpace& space);

/// max over the grid of F(alpha x) / F(x): a lower approximation of
/// D_F(alpha) = sup_{x>0} F(alpha x)/F(x). Requires F strictly increasing.
double dilation_modulus(const TransformFunction& f, double alpha, const SampleGrid& grid = {},
                        Execution exec = Execution::parallel);

struct IndexEstimate {
    double value = 0.0;       // log D_F(alpha) / log(alpha) at the last alpha
    double grid_max = 0.0;    // last alpha of the schedule
    std::size_t samples = 0;  // x samples per D_F evaluation
    double diagnostic = 0.0;  // |last - previous iterate|
    bool converged = false;   // diagnostic <= 0.02
    std::vector<double> alphas;
    std::vector<double> iterates;
};

/// Estimates beta(F) = lim log D_F(alpha) / log alpha along alpha = 2^4,
/// 2^8, ... up to alpha_max. Requires F subadditive and strictly increasing.
IndexEstimate upper_index(const TransformFunction& f, double alpha_max = 0x1.0p40, const SampleGrid& grid = {});

/// Grid supremum of F(sqrt(m+1) x) / F(x), i.e. D_F(sqrt(m+1)).
/// Requires F strictly increasing with F(sqrt .) concave.
double extension_factor(std::size_t m, const TransformFunction& f, const SampleGrid& grid = {});

struct CfBoundRow {
    std::size_t m;
    double dilation;  // D_F(m)
    double bound;     // m / D_F(m), a lower bound on c_F(P_m)
};

/// Rows m = 1..n_max. Requires F subadditive and strictly increasing.
std::vector<CfBoundRow> cf_lower_bound_table(const TransformFunction& f, std::size_t n_max, const SampleGrid& grid = {});

/// Sampled evidence against the declared flags (monotonicity,
/// subadditivity, concavity of F(sqrt .)). Returns human-readable warnings.
std::vector<std::string> check_declared_flags(const TransformFunction& f, const SampleGrid& grid = {});

} // namespace lipext
