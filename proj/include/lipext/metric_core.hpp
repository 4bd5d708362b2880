#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lipext/execution.hpp"
#include "lipext/matrix.hpp"

namespace lipext {

namespace tol {
inline constexpr double relative = 1e-9;
inline constexpr double absolute = 1e-12;
} // namespace tol

/// |a - b| <= relative * max(|a|, |b|), or <= absolute near zero.
bool approx_equal(double a, double b, double rel = tol::relative, double abs = tol::absolute);

using Point = std::vector<double>;

/// Exponent p of an l_p norm. p = infinity is its own state, never a large p.
class Norm {
public:
    static Norm lp(double p);
    static Norm infinity() { return Norm(true, 0.0); }
    static Norm euclidean() { return Norm(false, 2.0); }
    /// Accepts a decimal p >= 1 or one of "inf", "infinity", "max".
    static Norm parse(std::string_view text);

    bool is_infinite() const noexcept { return infinite_; }
    /// Finite exponent; only meaningful when !is_infinite().
    double p() const noexcept { return p_; }
    /// 1/p* = 1 - 1/p for finite p, 1 for p = infinity.
    double inverse_conjugate() const noexcept { return infinite_ ? 1.0 : 1.0 - 1.0 / p_; }
    std::string to_string() const;

    friend bool operator==(const Norm&, const Norm&) = default;

private:
    Norm(bool infinite, double p) : infinite_(infinite), p_(p) {}
    bool infinite_;
    double p_;
};

double lp_norm(std::span<const double> u, Norm p);
/// Throws ValidationError on dimension mismatch.
double lp_distance(std::span<const double> u, std::span<const double> v, Norm p);

/// Finite space with a symmetric, non-negative distance that vanishes on
/// the diagonal. The triangle inequality is not required.
class QuasiMetricSpace {
public:
    QuasiMetricSpace() = default;

    std::size_t size() const noexcept { return dist_.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return dist_(i, j); }
    const Matrix& distances() const noexcept { return dist_; }

    friend QuasiMetricSpace make_quasi_metric(Matrix dist);

protected:
    explicit QuasiMetricSpace(Matrix dist) : dist_(std::move(dist)) {}
    Matrix dist_;
};

/// Validates and wraps a distance matrix. Error messages name the first
/// offending entry in row-major order, e.g. "negative distance at (0,1)".
QuasiMetricSpace make_quasi_metric(Matrix dist);

struct MetricViolation {
    enum class Kind { triangle, zero_distance };
    Kind kind;
    std::size_t i;
    std::size_t j;
    std::size_t via;  // intermediate point for triangle violations
    double excess;    // d(i,j) - (d(i,via) + d(via,j)); 0 for zero_distance

    std::string describe() const;
};

/// Triangle and positivity violations over unordered pairs i < j. For each
/// pair at most one triangle violation is reported (the smallest via).
std::vector<MetricViolation> validate_metric(const QuasiMetricSpace& space);

/// A quasi-metric space that also satisfies the triangle inequality and
/// separates points.
class MetricSpace : public QuasiMetricSpace {
public:
    MetricSpace() = default;
    friend MetricSpace make_metric(const QuasiMetricSpace& space);
    friend MetricSpace make_metric(Matrix dist);

private:
    explicit MetricSpace(Matrix dist) : QuasiMetricSpace(std::move(dist)) {}
};

MetricSpace make_metric(const QuasiMetricSpace& space);
MetricSpace make_metric(Matrix dist);

/// P_n = {0, 1, ..., n} with |i - j|. Requires n >= 1.
MetricSpace path_space(std::size_t n);

/// Points of R^d, all of the same dimension, finite coordinates.
class EuclideanPointSet {
public:
    EuclideanPointSet() = default;
    explicit EuclideanPointSet(std::vector<Point> points);

    std::size_t size() const noexcept { return points_.size(); }
    std::size_t dimension() const noexcept { return dim_; }
    const Point& operator[](std::size_t i) const noexcept { return points_[i]; }
    const std::vector<Point>& points() const noexcept { return points_; }

private:
    std::vector<Point> points_;
    std::size_t dim_ = 0;
};

Matrix distance_matrix(const EuclideanPointSet& points, Norm p);

/// f: S -> Y for S a list of source indices. Images are either indices into
/// a finite target space or coordinate vectors in some l_p.
class PointMap {
public:
    using IndexImages = std::vector<std::size_t>;
    using CoordinateImages = std::vector<Point>;

    PointMap() = default;
    PointMap(std::vector<std::size_t> domain, IndexImages images);
    PointMap(std::vector<std::size_t> domain, CoordinateImages images);

    std::size_t size() const noexcept { return domain_.size(); }
    const std::vector<std::size_t>& domain() const noexcept { return domain_; }
    bool index_valued() const noexcept { return std::holds_alternative<IndexImages>(images_); }
    const IndexImages& index_images() const { return std::get<IndexImages>(images_); }
    const CoordinateImages& coordinate_images() const { return std::get<CoordinateImages>(images_); }

private:
    void check_domain() const;
    std::vector<std::size_t> domain_;
    std::variant<IndexImages, CoordinateImages> images_;
};

/// Either a finite target space (for index-valued maps) or an l_p norm
/// (for coordinate-valued maps).
using TargetSpace = std::variant<QuasiMetricSpace, Norm>;

/// rho_Y(f(domain[a]), f(domain[b])).
double image_distance(const PointMap& f, std::size_t a, std::size_t b, const TargetSpace& target);

/// max over domain pairs of rho_Y(f x, f x') / d_X(x, x'); 0 for |S| <= 1.
/// Throws InfiniteLipschitzError if a pair at source distance 0 has
/// distinct images, ValidationError on out-of-range indices or a map kind
/// that does not match the target.
double lipschitz_constant(const PointMap& f, const QuasiMetricSpace& source, const TargetSpace& target,
                          Execution exec = Execution::parallel);

} // namespace lipext
