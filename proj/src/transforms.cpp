#include "lipext/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lipext/error.hpp"
#include "lipext/io.hpp"
#include "lipext/kernels.hpp"

namespace lipext {

TransformFunction TransformFunction::identity() { return {Family::identity, 1.0, {true, true, true}}; }

TransformFunction TransformFunction::power(double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw ValidationError("power transform needs theta > 0, got " + io::format_double(theta));
    return {Family::power, theta, {theta <= 1.0, true, theta <= 2.0}};
}

TransformFunction TransformFunction::saturating(double a) {
    if (!(a >= 0.0) || !std::isfinite(a))
        throw ValidationError("saturating transform needs a >= 0, got " + io::format_double(a));
    return {Family::saturating, a, {true, false, true}};
}

TransformFunction TransformFunction::table(std::vector<double> xs, std::vector<double> ys, Flags flags) {
    if (xs.size() != ys.size() || xs.size() < 2) throw ValidationError("table transform needs >= 2 (x, y) samples");
    if (xs[0] != 0.0 || ys[0] != 0.0) throw ValidationError("table transform must start at (0, 0)");
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) throw ValidationError("table transform x samples must be strictly increasing");
        if (!(ys[i] >= 0.0) || !std::isfinite(ys[i])) throw ValidationError("table transform values must be >= 0");
    }
    TransformFunction f{Family::table, 0.0, flags};
    f.xs_ = std::move(xs);
    f.ys_ = std::move(ys);
    return f;
}

TransformFunction TransformFunction::parse(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string_view name = spec.substr(0, colon);
    auto arg = [&]() {
        if (colon == std::string_view::npos)
            throw ValidationError("transform '" + std::string(spec) + "' needs a parameter, e.g. power:0.5");
        return io::parse_double(spec.substr(colon + 1));
    };
    if (name == "identity" || name == "id") return identity();
    if (name == "power") return power(arg());
    if (name == "saturating") return saturating(arg());
    throw ValidationError("unknown transform '" + std::string(spec) + "' (expected identity, power:T, saturating:A)");
}

double TransformFunction::domain_max() const noexcept {
    return family_ == Family::table ? xs_.back() : std::numeric_limits<double>::infinity();
}

double TransformFunction::operator()(double x) const {
    if (!(x >= 0.0)) throw ValidationError("transform evaluated at negative argument " + io::format_double(x));
    switch (family_) {
    case Family::identity:
        return x;
    case Family::power:
        return std::pow(x, param_);
    case Family::saturating:
        return x == 0.0 ? 0.0 : param_;
    case Family::table: {
        if (x > xs_.back())
            throw ValidationError("table transform undefined at " + io::format_double(x) + " (table ends at " +
                                  io::format_double(xs_.back()) + ")");
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        if (it == xs_.end()) return ys_.back();
        const std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
        const std::size_t lo = hi - 1;
        const double t = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
        return ys_[lo] + t * (ys_[hi] - ys_[lo]);
    }
    }
    return 0.0;
}

std::string TransformFunction::describe() const {
    switch (family_) {
    case Family::identity:
        return "identity";
    case Family::power:
        return "power:" + io::format_double(param_);
    case Family::saturating:
        return "saturating:" + io::format_double(param_);
    case Family::table:
        return "table[" + std::to_string(xs_.size()) + "]";
    }
    return "?";
}

std::vector<double> SampleGrid::points() const {
    if (!(x_min > 0.0) || !(x_max >= x_min) || samples == 0) throw ValidationError("invalid sample grid");
    std::vector<double> xs(samples);
    if (samples == 1) {
        xs[0] = x_min;
        return xs;
    }
    const double lo = std::log(x_min), hi = std::log(x_max);
    for (std::size_t i = 0; i < samples; ++i)
        xs[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1));
    xs.front() = x_min;
    xs.back() = x_max;
    return xs;
}

QuasiMetricSpace apply_transform(const TransformFunction& f, const QuasiMetricSpace& space) {
    Matrix d = space.distances();
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j) d(i, j) = f(d(i, j));
    return make_quasi_metric(std::move(d));
}

namespace {

void require_increasing(const TransformFunction& f, const char* op) {
    if (!f.flags().strictly_increasing)
        throw ValidationError(std::string(op) + " needs a strictly increasing transform, got " + f.describe());
}

void require_subadditive(const TransformFunction& f, const char* op) {
    if (!f.flags().subadditive)
        throw ValidationError(std::string(op) + " needs a subadditive transform, got " + f.describe());
}

} // namespace

double dilation_modulus(const TransformFunction& f, double alpha, const SampleGrid& grid, Execution exec) {
    require_increasing(f, "dilation_modulus");
    if (!(alpha >= 0.0)) throw ValidationError("dilation_modulus needs alpha >= 0");
    const std::vector<double> xs = grid.points();
    if (alpha * xs.back() > f.domain_max() || xs.back() > f.domain_max())
        throw ValidationError("transform " + f.describe() + " undefined on the dilated grid (needs x up to " +
                              io::format_double(std::max(alpha, 1.0) * xs.back()) + ")");
    auto ratio = [&](double x) { return f(alpha * x) / f(x); };
    return exec == Execution::parallel ? kernels::grid_max_parallel(xs, ratio) : kernels::grid_max_serial(xs, ratio);
}

IndexEstimate upper_index(const TransformFunction& f, double alpha_max, const SampleGrid& grid) {
    require_increasing(f, "upper_index");
    require_subadditive(f, "upper_index");
    IndexEstimate est;
    est.samples = grid.samples;
    for (int e = 4; e <= 1020; e += 4) {
        const double alpha = std::ldexp(1.0, e);
        if (alpha > alpha_max) break;
        est.alphas.push_back(alpha);
        est.iterates.push_back(std::log(dilation_modulus(f, alpha, grid)) / std::log(alpha));
    }
    if (est.iterates.size() < 2)
        throw ValidationError("upper_index needs alpha_max >= 2^8 to produce two iterates");
    est.value = est.iterates.back();
    est.grid_max = est.alphas.back();
    est.diagnostic = std::abs(est.iterates.back() - est.iterates[est.iterates.size() - 2]);
    est.converged = est.diagnostic <= 0.02;
    return est;
}

double extension_factor(std::size_t m, const TransformFunction& f, const SampleGrid& grid) {
    require_increasing(f, "extension_factor");
    if (!f.flags().concave_in_sqrt)
        throw ValidationError("extension_factor needs F(sqrt .) concave, got " + f.describe());
    return dilation_modulus(f, std::sqrt(static_cast<double>(m) + 1.0), grid);
}

std::vector<CfBoundRow> cf_lower_bound_table(const TransformFunction& f, std::size_t n_max, const SampleGrid& grid) {
    require_increasing(f, "cf_lower_bound_table");
    require_subadditive(f, "cf_lower_bound_table");
    std::vector<CfBoundRow> rows;
    rows.reserve(n_max);
    for (std::size_t m = 1; m <= n_max; ++m) {
        const double d = dilation_modulus(f, static_cast<double>(m), grid);
        rows.push_back({m, d, static_cast<double>(m) / d});
    }
    return rows;
}

std::vector<std::string> check_declared_flags(const TransformFunction& f, const SampleGrid& grid) {
    std::vector<std::string> warnings;
    std::vector<double> xs = grid.points();
    xs.erase(std::remove_if(xs.begin(), xs.end(), [&](double x) { return x > f.domain_max(); }), xs.end());
    const auto& flags = f.flags();
    auto bad = [](double lhs, double rhs) { return lhs > rhs && !approx_equal(lhs, rhs); };
    if (flags.strictly_increasing) {
        for (std::size_t i = 1; i < xs.size(); ++i) {
            if (!(f(xs[i]) > f(xs[i - 1]))) {
                warnings.push_back(f.describe() + " declared strictly increasing but F(" + io::format_double(xs[i]) +
                                   ") <= F(" + io::format_double(xs[i - 1]) + ")");
                break;
            }
        }
    }
    if (flags.subadditive) {
        for (std::size_t i = 0; i < xs.size(); i += 7) {
            for (std::size_t j = i; j < xs.size(); j += 7) {
                const double s = xs[i] + xs[j];
                if (s > f.domain_max()) continue;
                if (bad(f(s), f(xs[i]) + f(xs[j]))) {
                    warnings.push_back(f.describe() + " declared subadditive but F(x+y) > F(x)+F(y) at x=" +
                                       io::format_double(xs[i]) + ", y=" + io::format_double(xs[j]));
                    i = xs.size();
                    break;
                }
            }
        }
    }
    if (flags.concave_in_sqrt) {
        auto g = [&](double t) { return f(std::sqrt(t)); };
        for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
            const double a = xs[i - 1] * xs[i - 1], b = xs[i + 1] * xs[i + 1];
            if (std::sqrt(b) > f.domain_max()) break;
            const double mid = 0.5 * (a + b);
            if (bad(0.5 * (g(a) + g(b)), g(mid))) {
                warnings.push_back(f.describe() + " declared with F(sqrt .) concave but midpoint concavity fails near t=" +
                                   io::format_double(mid));
                break;
            }
        }
    }
    return warnings;
}

} // namespace lipext
