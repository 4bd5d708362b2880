#include "lipext/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lipext/error.hpp"

namespace lipext {

QuadInstance::QuadInstance(EuclideanPointSet points, WeightFunction weights, std::vector<std::size_t> free_set)
    : points_(std::move(points)), weights_(std::move(weights)), free_(std::move(free_set)) {
    const std::size_t n = points_.size();
    if (weights_.size() != n)
        throw ValidationError("weight matrix is " + std::to_string(weights_.size()) + "x" +
                              std::to_string(weights_.size()) + " but there are " + std::to_string(n) + " points");
    std::sort(free_.begin(), free_.end());
    if (std::adjacent_find(free_.begin(), free_.end()) != free_.end())
        throw ValidationError("free set has repeated indices");
    anchors_ = complement(free_, n);
    if (free_.empty() || anchors_.empty()) throw ValidationError("free set J must be a nonempty proper subset");
    for (std::size_t k : anchors_)
        for (std::size_t l : anchors_)
            if (weights_(k, l) != 0.0)
                throw ValidationError("lambda must vanish on J^c x J^c, found weight at (" + std::to_string(k) + "," +
                                      std::to_string(l) + ")");
    for (std::size_t i : free_) {
        double s = 0.0;
        for (std::size_t k : anchors_) s += weights_(i, k);
        if (!(s > 0.0))
            throw ValidationError("free point " + std::to_string(i) + " has no anchor weight (M(lambda,J) not dominant)");
    }
}

double phi_value(const QuadInstance& instance, const std::vector<Point>& z) {
    const std::size_t n = instance.size();
    if (z.size() != n) throw ValidationError("assignment size does not match the index set");
    const auto& w = instance.weights();
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
            if (w(k, l) == 0.0) continue;
            const double d = lp_distance(z[k], z[l], Norm::euclidean());
            s += w(k, l) * d * d;
        }
    }
    return s;
}

double closed_form_minimum(const QuadInstance& instance) {
    const MMatrixBundle b = build_m_matrix(instance.weights(), instance.free_set());
    const auto& J = instance.free_set();
    const auto& Jc = instance.anchor_set();
    const auto& w = instance.weights();
    const auto& x = instance.points();
    double s = 0.0;
    for (std::size_t a = 0; a < J.size(); ++a) {
        for (std::size_t b2 = 0; b2 < J.size(); ++b2) {
            const double cij = b.c(a, b2);
            for (std::size_t k : Jc) {
                const double lik = w(J[a], k);
                if (lik == 0.0) continue;
                for (std::size_t l : Jc) {
                    const double ljl = w(J[b2], l);
                    if (ljl == 0.0 || k == l) continue;
                    const double d = lp_distance(x[k], x[l], Norm::euclidean());
                    s += lik * cij * ljl * d * d;
                }
            }
        }
    }
    return s;
}

namespace {

/// M(lambda, J) for the instance, in the order of J.
Matrix stationarity_matrix(const QuadInstance& inst) {
    const auto& J = inst.free_set();
    const auto& w = inst.weights();
    Matrix M(J.size(), J.size());
    for (std::size_t a = 0; a < J.size(); ++a) {
        double diag = 0.0;
        for (std::size_t j = 0; j < inst.size(); ++j) diag += w(J[a], j);
        for (std::size_t b = 0; b < J.size(); ++b)
            if (a != b) M(a, b) = -w(J[a], J[b]);
        M(a, a) = diag;
    }
    return M;
}

std::vector<Point> descend(const QuadInstance& inst, const DescentConfig& cfg, std::size_t& iterations,
                           bool& converged) {
    const auto& J = inst.free_set();
    const auto& Jc = inst.anchor_set();
    const auto& w = inst.weights();
    const std::size_t n = inst.size(), d = inst.dimension();

    std::vector<Point> z = inst.points().points();
    Point bary(d, 0.0);
    for (std::size_t k : Jc)
        for (std::size_t t = 0; t < d; ++t) bary[t] += z[k][t] / static_cast<double>(Jc.size());
    for (std::size_t i : J) z[i] = bary;

    double max_row = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < n; ++j) r += w(i, j);
        max_row = std::max(max_row, r);
    }
    const double step = 1.0 / (4.0 * max_row);

    std::vector<Point> grad(J.size(), Point(d));
    converged = false;
    for (iterations = 0; iterations < cfg.max_iterations; ++iterations) {
        double gnorm2 = 0.0;
        for (std::size_t a = 0; a < J.size(); ++a) {
            const std::size_t i = J[a];
            std::fill(grad[a].begin(), grad[a].end(), 0.0);
            for (std::size_t l = 0; l < n; ++l) {
                const double wil = w(i, l);
                if (wil == 0.0) continue;
                for (std::size_t t = 0; t < d; ++t) grad[a][t] += 4.0 * wil * (z[i][t] - z[l][t]);
            }
            for (double g : grad[a]) gnorm2 += g * g;
        }
        if (std::sqrt(gnorm2) < cfg.gradient_tolerance) {
            converged = true;
            break;
        }
        for (std::size_t a = 0; a < J.size(); ++a)
            for (std::size_t t = 0; t < d; ++t) z[J[a]][t] -= step * grad[a][t];
    }
    return z;
}

} // namespace

OracleResult oracle_minimum(const QuadInstance& instance, const DescentConfig& config) {
    const auto& J = instance.free_set();
    const auto& Jc = instance.anchor_set();
    const auto& w = instance.weights();
    const auto& x = instance.points();
    const std::size_t d = instance.dimension();
    OracleResult out;

    // Route (a): per-coordinate stationarity system M p_t = r_t.
    const Matrix L = cholesky_factor(stationarity_matrix(instance));
    out.argmin = x.points();
    double value = 0.0;
    for (std::size_t t = 0; t < d; ++t) {
        std::vector<double> r(J.size(), 0.0);
        double constant = 0.0;
        for (std::size_t a = 0; a < J.size(); ++a) {
            for (std::size_t k : Jc) {
                r[a] += w(J[a], k) * x[k][t];
                constant += w(J[a], k) * x[k][t] * x[k][t];
            }
        }
        const std::vector<double> p = cholesky_solve(L, r);
        double rp = 0.0;
        for (std::size_t a = 0; a < J.size(); ++a) {
            rp += r[a] * p[a];
            out.argmin[J[a]][t] = p[a];
        }
        value += constant - rp;
    }
    // Phi over ordered pairs counts each unordered pair twice.
    out.value = 2.0 * value;

    // Route (b): gradient descent on the free points.
    const std::vector<Point> z = descend(instance, config, out.descent_iterations, out.descent_converged);
    out.descent_value = phi_value(instance, z);
    out.routes_agree = std::abs(out.value - out.descent_value) <= 1e-6 * (1.0 + std::abs(out.value));
    return out;
}

std::vector<double> sum_to_one_check(const QuadInstance& instance) {
    const MMatrixBundle b = build_m_matrix(instance.weights(), instance.free_set());
    const auto& J = instance.free_set();
    const auto& Jc = instance.anchor_set();
    const auto& w = instance.weights();
    std::vector<double> anchor_weight(J.size(), 0.0);
    for (std::size_t a = 0; a < J.size(); ++a)
        for (std::size_t k : Jc) anchor_weight[a] += w(J[a], k);
    std::vector<double> res(J.size());
    for (std::size_t a = 0; a < J.size(); ++a) {
        double s = 0.0;
        for (std::size_t b2 = 0; b2 < J.size(); ++b2) s += b.c(a, b2) * anchor_weight[b2];
        res[a] = std::abs(s - 1.0);
    }
    return res;
}

QuadInstance random_quad_instance(Rng& rng, std::size_t free_count, std::size_t anchor_count, std::size_t dimension) {
    const std::size_t n = free_count + anchor_count;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    std::vector<std::size_t> J(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(free_count));
    std::vector<bool> is_free(n, false);
    for (std::size_t i : J) is_free[i] = true;

    Matrix lambda(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!is_free[i] && !is_free[j]) continue;
            const double v = rng.coin(0.3) ? 0.0 : rng.uniform(0.0, 2.0);
            lambda(i, j) = lambda(j, i) = v;
        }
    }
    for (std::size_t i : J) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (!is_free[k]) s += lambda(i, k);
        if (s < 0.1) {
            std::size_t k;
            do {
                k = rng.index(n);
            } while (is_free[k]);
            lambda(i, k) = lambda(k, i) = rng.uniform(0.1, 2.0);
        }
    }
    std::vector<Point> pts(n, Point(dimension));
    for (auto& p : pts)
        for (double& c : p) c = rng.uniform(-1.0, 1.0);
    return QuadInstance(EuclideanPointSet(std::move(pts)), WeightFunction(std::move(lambda)), std::move(J));
}

} // namespace lipext
