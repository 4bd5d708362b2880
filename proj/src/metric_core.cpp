#include "lipext/metric_core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "lipext/error.hpp"
#include "lipext/kernels.hpp"

namespace lipext {

namespace {

std::string pair_str(std::size_t i, std::size_t j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

} // namespace

bool approx_equal(double a, double b, double rel, double abs) {
    if (a == b) return true;
    const double diff = std::abs(a - b);
    return diff <= abs || diff <= rel * std::max(std::abs(a), std::abs(b));
}

Norm Norm::lp(double p) {
    if (std::isinf(p) && p > 0) return infinity();
    if (!(p >= 1.0)) throw ValidationError("norm exponent p must be >= 1, got " + std::to_string(p));
    return Norm(false, p);
}

Norm Norm::parse(std::string_view text) {
    if (text == "inf" || text == "infinity" || text == "max" || text == "Inf") return infinity();
    double p = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, p);
    if (ec != std::errc{} || ptr != end) throw ValidationError("cannot parse norm exponent '" + std::string(text) + "'");
    return lp(p);
}

std::string Norm::to_string() const {
    if (infinite_) return "inf";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, p_);
    return std::string(buf, ptr);
}

double lp_norm(std::span<const double> u, Norm p) {
    if (p.is_infinite()) {
        double m = 0.0;
        for (double x : u) m = std::max(m, std::abs(x));
        return m;
    }
    if (p.p() == 1.0) {
        double s = 0.0;
        for (double x : u) s += std::abs(x);
        return s;
    }
    // Scale by the max entry so large p neither overflows nor underflows.
    double scale = 0.0;
    for (double x : u) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) return 0.0;
    if (p.p() == 2.0) {
        double s = 0.0;
        for (double x : u) s += (x / scale) * (x / scale);
        return scale * std::sqrt(s);
    }
    double s = 0.0;
    for (double x : u) s += std::pow(std::abs(x) / scale, p.p());
    return scale * std::pow(s, 1.0 / p.p());
}

double lp_distance(std::span<const double> u, std::span<const double> v, Norm p) {
    if (u.size() != v.size()) {
        throw ValidationError("dimension mismatch: " + std::to_string(u.size()) + " vs " + std::to_string(v.size()));
    }
    std::vector<double> diff(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) diff[i] = u[i] - v[i];
    return lp_norm(diff, p);
}

QuasiMetricSpace make_quasi_metric(Matrix dist) {
    if (!dist.square()) {
        throw ValidationError("distance matrix must be square, got " + std::to_string(dist.rows()) + "x" +
                              std::to_string(dist.cols()));
    }
    const std::size_t n = dist.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double d = dist(i, j);
            if (!std::isfinite(d)) throw ValidationError("non-finite distance at " + pair_str(i, j));
            if (i == j && d != 0.0) throw ValidationError("nonzero diagonal at " + pair_str(i, j));
            if (d < 0.0) throw ValidationError("negative distance at " + pair_str(i, j));
            if (d != dist(j, i)) throw ValidationError("asymmetric distance at " + pair_str(i, j));
        }
    }
    return QuasiMetricSpace(std::move(dist));
}

std::string MetricViolation::describe() const {
    std::ostringstream os;
    if (kind == Kind::zero_distance) {
        os << "zero distance between distinct points " << pair_str(i, j);
    } else {
        os << "triangle inequality fails at " << pair_str(i, j) << " via " << via << " (excess " << excess << ")";
    }
    return os.str();
}

std::vector<MetricViolation> validate_metric(const QuasiMetricSpace& space) {
    std::vector<MetricViolation> out;
    const std::size_t n = space.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dij = space(i, j);
            if (dij <= 0.0) out.push_back({MetricViolation::Kind::zero_distance, i, j, 0, 0.0});
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const double detour = space(i, k) + space(k, j);
                if (dij > detour && !approx_equal(dij, detour)) {
                    out.push_back({MetricViolation::Kind::triangle, i, j, k, dij - detour});
                    break;
                }
            }
        }
    }
    return out;
}

MetricSpace make_metric(const QuasiMetricSpace& space) {
    const auto violations = validate_metric(space);
    if (!violations.empty()) throw ValidationError("not a metric: " + violations.front().describe());
    return MetricSpace(space.distances());
}

MetricSpace make_metric(Matrix dist) { return make_metric(make_quasi_metric(std::move(dist))); }

MetricSpace path_space(std::size_t n) {
    if (n == 0) throw ValidationError("path space needs n >= 1");
    Matrix d(n + 1, n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= n; ++j) d(i, j) = std::abs(static_cast<double>(i) - static_cast<double>(j));
    return make_metric(std::move(d));
}

EuclideanPointSet::EuclideanPointSet(std::vector<Point> points) : points_(std::move(points)) {
    dim_ = points_.empty() ? 0 : points_.front().size();
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].size() != dim_) {
            throw ValidationError("point " + std::to_string(i) + " has dimension " + std::to_string(points_[i].size()) +
                                  ", expected " + std::to_string(dim_));
        }
        for (double x : points_[i])
            if (!std::isfinite(x)) throw ValidationError("point " + std::to_string(i) + " has a non-finite coordinate");
    }
}

Matrix distance_matrix(const EuclideanPointSet& points, Norm p) {
    const std::size_t n = points.size();
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d(i, j) = d(j, i) = lp_distance(points[i], points[j], p);
    return d;
}

PointMap::PointMap(std::vector<std::size_t> domain, IndexImages images)
    : domain_(std::move(domain)), images_(std::move(images)) {
    check_domain();
}

PointMap::PointMap(std::vector<std::size_t> domain, CoordinateImages images)
    : domain_(std::move(domain)), images_(std::move(images)) {
    check_domain();
    const auto& pts = coordinate_images();
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].size() != pts[0].size()) throw ValidationError("map images must share one dimension");
}

void PointMap::check_domain() const {
    const std::size_t n_images =
        std::visit([](const auto& v) { return v.size(); }, images_);
    if (n_images != domain_.size()) {
        throw ValidationError("map has " + std::to_string(domain_.size()) + " domain points but " +
                              std::to_string(n_images) + " images");
    }
    std::vector<std::size_t> sorted = domain_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ValidationError("map domain indices must be distinct");
}

double image_distance(const PointMap& f, std::size_t a, std::size_t b, const TargetSpace& target) {
    if (const auto* y = std::get_if<QuasiMetricSpace>(&target)) {
        const auto& img = f.index_images();
        return (*y)(img[a], img[b]);
    }
    const auto& img = f.coordinate_images();
    return lp_distance(img[a], img[b], std::get<Norm>(target));
}

double lipschitz_constant(const PointMap& f, const QuasiMetricSpace& source, const TargetSpace& target,
                          Execution exec) {
    const auto& dom = f.domain();
    for (std::size_t x : dom)
        if (x >= source.size())
            throw ValidationError("index " + std::to_string(x) + " out of range for n=" + std::to_string(source.size()));
    if (const auto* y = std::get_if<QuasiMetricSpace>(&target)) {
        if (!f.index_valued()) throw ValidationError("finite target space needs an index-valued map");
        for (std::size_t v : f.index_images())
            if (v >= y->size())
                throw ValidationError("image index " + std::to_string(v) + " out of range for target n=" +
                                      std::to_string(y->size()));
    } else if (f.index_valued()) {
        throw ValidationError("l_p target needs a coordinate-valued map");
    }

    auto ratio = [&](std::size_t a, std::size_t b) {
        const double rho = image_distance(f, a, b, target);
        const double d = source(dom[a], dom[b]);
        if (d == 0.0) return rho == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return rho / d;
    };
    const double lip = exec == Execution::parallel ? kernels::pairwise_max_parallel(f.size(), ratio)
                                                   : kernels::pairwise_max_serial(f.size(), ratio);
    if (std::isinf(lip)) {
        for (std::size_t a = 0; a < f.size(); ++a)
            for (std::size_t b = a + 1; b < f.size(); ++b)
                if (std::isinf(ratio(a, b)))
                    throw InfiniteLipschitzError("Lipschitz constant is +inf: points " + std::to_string(dom[a]) +
                                                 " and " + std::to_string(dom[b]) +
                                                 " are at distance 0 with distinct images");
    }
    return lip;
}

} // namespace lipext
