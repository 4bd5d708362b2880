#include "lipext/hilbert_extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>

#include "lipext/error.hpp"
#include "lipext/kernels.hpp"
#include "lipext/random.hpp"
#include "lipext/rational_simplex.hpp"

namespace lipext {

Matrix walsh_matrix(std::size_t k) {
    if (k > 10) throw ValidationError("walsh_matrix: k = " + std::to_string(k) + " exceeds 10");
    Matrix w(1, 1, 1.0);
    for (std::size_t level = 0; level < k; ++level) {
        const std::size_t h = w.rows();
        Matrix next(2 * h, 2 * h);
        for (std::size_t i = 0; i < h; ++i) {
            for (std::size_t j = 0; j < h; ++j) {
                next(i, j) = next(i, j + h) = next(i + h, j) = w(i, j);
                next(i + h, j + h) = -w(i, j);
            }
        }
        w = std::move(next);
    }
    return w;
}

WalshInstance walsh_instance(std::size_t k, Norm p) {
    if (k < 1) throw ValidationError("walsh_instance needs k >= 1");
    const Matrix w = walsh_matrix(k);
    const std::size_t n = w.rows();
    WalshInstance inst;
    inst.k = k;
    inst.p = p;
    inst.columns.assign(n, Point(n - 1));
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t r = 1; r < n; ++r) inst.columns[l][r - 1] = w(r, l);

    for (std::size_t r = 0; r + 1 < n; ++r) {
        double sum = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
            const double e = inst.columns[l][r];
            if (e != 1.0 && e != -1.0) throw NumericalError("Walsh entry is not +-1");
            sum += e;
        }
        if (sum != 0.0) throw NumericalError("Walsh columns do not sum to zero");
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            double dot = 0.0;
            for (std::size_t r = 0; r < n; ++r) dot += w(r, a) * w(r, b);
            if (dot != 0.0) throw NumericalError("Walsh columns are not orthogonal");
        }
    }
    return inst;
}

double walsh_lip(std::size_t k, Norm p) {
    if (k < 1) throw ValidationError("walsh_lip needs k >= 1");
    return std::pow(std::ldexp(1.0, static_cast<int>(k) - 1), p.inverse_conjugate());
}

double walsh_lower_bound(std::size_t k, Norm p) {
    if (k < 1) throw ValidationError("walsh_lower_bound needs k >= 1");
    return std::pow(2.0 - std::ldexp(1.0, 1 - static_cast<int>(k)), p.inverse_conjugate());
}

ExtensionProblem::ExtensionProblem(EuclideanPointSet points, std::vector<std::size_t> s, std::vector<Point> images,
                                   std::vector<std::size_t> t, Norm target, std::optional<TransformFunction> transform,
                                   Norm source)
    : points_(std::move(points)),
      s_(std::move(s)),
      images_(std::move(images)),
      t_(std::move(t)),
      target_(target),
      transform_(std::move(transform)),
      source_(source) {
    const std::size_t n = points_.size();
    if (s_.empty()) throw ValidationError("s must be nonempty");
    if (images_.size() != s_.size())
        throw ValidationError("images has " + std::to_string(images_.size()) + " entries but s has " +
                              std::to_string(s_.size()));
    std::vector<int> seen(n, 0);
    for (const auto* list : {&s_, &t_}) {
        for (std::size_t i : *list) {
            if (i >= n) throw ValidationError("index " + std::to_string(i) + " out of range for n=" + std::to_string(n));
            if (seen[i]++) throw ValidationError("point " + std::to_string(i) + " listed twice in s and t");
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!seen[i]) throw ValidationError("point " + std::to_string(i) + " is in neither s nor t");
    const PointMap f(s_, images_);  // checks the image dimensions

    dist_ = distance_matrix(points_, source_);
    if (transform_) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) dist_(i, j) = (*transform_)(dist_(i, j));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!(dist_(i, j) > 0.0))
                throw ValidationError("points " + std::to_string(i) + " and " + std::to_string(j) +
                                      " are at source distance 0");
    space_ = make_quasi_metric(dist_);
    lip_f_ = lipschitz_constant(f, space_, target_);
}

ExtensionProblem walsh_problem(std::size_t k, Norm source_p) {
    const WalshInstance inst = walsh_instance(k, source_p);
    const std::size_t n = inst.columns.size();
    std::vector<Point> pts = inst.columns;
    pts.emplace_back(n - 1, 0.0);
    std::vector<std::size_t> s(n);
    std::iota(s.begin(), s.end(), std::size_t{0});
    return ExtensionProblem(EuclideanPointSet(std::move(pts)), std::move(s), inst.columns, {n}, Norm::lp(1.0),
                            std::nullopt, source_p);
}

namespace {

/// g with <g, u> = ||u||_p and ||g||_{p*} <= 1; zero at u = 0.
void norm_subgradient(std::span<const double> u, Norm p, std::span<double> g) {
    std::fill(g.begin(), g.end(), 0.0);
    const double nu = lp_norm(u, p);
    if (nu == 0.0) return;
    auto sgn = [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); };
    if (p.is_infinite()) {
        std::size_t r = 0;
        for (std::size_t i = 1; i < u.size(); ++i)
            if (std::abs(u[i]) > std::abs(u[r])) r = i;
        g[r] = sgn(u[r]);
    } else if (p.p() == 1.0) {
        for (std::size_t i = 0; i < u.size(); ++i) g[i] = sgn(u[i]);
    } else if (p.p() == 2.0) {
        for (std::size_t i = 0; i < u.size(); ++i) g[i] = u[i] / nu;
    } else {
        for (std::size_t i = 0; i < u.size(); ++i) g[i] = sgn(u[i]) * std::pow(std::abs(u[i]) / nu, p.p() - 1.0);
    }
}

/// One-sided derivative of ||u + t h||_p at t = 0+.
double norm_directional(std::span<const double> u, std::span<const double> h, Norm p) {
    const double nu = lp_norm(u, p);
    if (nu == 0.0) return lp_norm(h, p);
    double umax = 0.0;
    for (double x : u) umax = std::max(umax, std::abs(x));
    if (p.is_infinite()) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < u.size(); ++i)
            if (std::abs(u[i]) >= umax * (1.0 - 1e-12)) best = std::max(best, u[i] > 0.0 ? h[i] : -h[i]);
        return best;
    }
    if (p.p() == 1.0) {
        double d = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (std::abs(u[i]) <= 1e-12 * umax)
                d += std::abs(h[i]);
            else
                d += u[i] > 0.0 ? h[i] : -h[i];
        }
        return d;
    }
    std::vector<double> g(u.size());
    norm_subgradient(u, p, g);
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) d += g[i] * h[i];
    return d;
}

struct Constraint {
    bool both_new;
    std::size_t i;  // T position
    std::size_t j;  // T position or S position
    double inv_dist;
};

/// Flattened view of the problem used by the solver.
class Objective {
public:
    explicit Objective(const ExtensionProblem& pb) : pb_(pb), d_(pb.image_dimension()), m_(pb.m()) {
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t a = 0; a < pb.s().size(); ++a)
                cons_.push_back({false, i, a, 1.0 / pb.distance(pb.t()[i], pb.s()[a])});
            for (std::size_t j = i + 1; j < m_; ++j)
                cons_.push_back({true, i, j, 1.0 / pb.distance(pb.t()[i], pb.t()[j])});
        }
        diff_.resize(d_);
    }

    std::size_t dimension() const { return m_ * d_; }
    std::size_t point_dimension() const { return d_; }
    const std::vector<Constraint>& constraints() const { return cons_; }

    const double* other(const Constraint& c, const std::vector<double>& w) const {
        return c.both_new ? &w[c.j * d_] : pb_.images()[c.j].data();
    }

    double value(const Constraint& c, const std::vector<double>& w) {
        const double* a = &w[c.i * d_];
        const double* b = other(c, w);
        for (std::size_t r = 0; r < d_; ++r) diff_[r] = a[r] - b[r];
        return lp_norm(diff_, pb_.target()) * c.inv_dist;
    }

    /// Objective value and the index of its first maximizing constraint.
    std::pair<double, std::size_t> evaluate(const std::vector<double>& w) {
        double best = 0.0;
        std::size_t arg = 0;
        for (std::size_t c = 0; c < cons_.size(); ++c) {
            const double v = value(cons_[c], w);
            if (v > best) {
                best = v;
                arg = c;
            }
        }
        return {best, arg};
    }

    /// Subgradient of constraint c at w, written into g (size m*d).
    void subgradient(std::size_t ci, const std::vector<double>& w, std::vector<double>& g) {
        const Constraint& c = cons_[ci];
        std::fill(g.begin(), g.end(), 0.0);
        const double* a = &w[c.i * d_];
        const double* b = other(c, w);
        for (std::size_t r = 0; r < d_; ++r) diff_[r] = a[r] - b[r];
        std::vector<double> local(d_);
        norm_subgradient(diff_, pb_.target(), local);
        for (std::size_t r = 0; r < d_; ++r) {
            g[c.i * d_ + r] = local[r] * c.inv_dist;
            if (c.both_new) g[c.j * d_ + r] = -local[r] * c.inv_dist;
        }
    }

    double directional(const Constraint& c, const std::vector<double>& w, const std::vector<double>& h) {
        const double* a = &w[c.i * d_];
        const double* b = other(c, w);
        std::vector<double> hd(d_);
        for (std::size_t r = 0; r < d_; ++r) {
            diff_[r] = a[r] - b[r];
            hd[r] = h[c.i * d_ + r] - (c.both_new ? h[c.j * d_ + r] : 0.0);
        }
        return norm_directional(diff_, hd, pb_.target()) * c.inv_dist;
    }

private:
    const ExtensionProblem& pb_;
    std::size_t d_;
    std::size_t m_;
    std::vector<Constraint> cons_;
    std::vector<double> diff_;
};

struct RestartOutcome {
    std::vector<double> w;
    double value = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool cap_hit = false;
};

RestartOutcome run_restart(const ExtensionProblem& pb, const SolverConfig& cfg, std::vector<double> w) {
    Objective obj(pb);
    RestartOutcome out;
    auto [lw, arg] = obj.evaluate(w);
    out.w = w;
    out.value = lw;
    if (obj.constraints().empty() || lw == 0.0) return out;

    const double stop_gap = cfg.tolerance * 1e-3;
    double delta = 0.1 * lw;
    double reference = lw;
    std::size_t stall = 0;
    std::vector<double> g(w.size());
    bool done = false;
    for (; out.iterations < cfg.max_iterations; ++out.iterations) {
        obj.subgradient(arg, w, g);
        double gn2 = 0.0;
        for (double x : g) gn2 += x * x;
        if (gn2 == 0.0) {
            done = true;
            break;
        }
        const double step = (lw - (out.value - delta)) / gn2;
        for (std::size_t r = 0; r < w.size(); ++r) w[r] -= step * g[r];
        std::tie(lw, arg) = obj.evaluate(w);
        if (lw < out.value) {
            out.value = lw;
            out.w = w;
        }
        if (out.value <= reference - 0.5 * delta) {
            reference = out.value;
            stall = 0;
        } else if (++stall >= cfg.refresh_interval) {
            delta *= 0.5;
            stall = 0;
            reference = out.value;
            w = out.w;
            std::tie(lw, arg) = obj.evaluate(w);
            if (delta <= stop_gap * out.value) {
                done = true;
                break;
            }
        }
    }
    out.cap_hit = !done;
    return out;
}

/// Euclidean projection of x onto the probability simplex.
void project_simplex(std::vector<double>& x) {
    std::vector<double> u = x;
    std::sort(u.begin(), u.end(), std::greater<>());
    double cum = 0.0, theta = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        cum += u[i];
        const double t = (cum - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) theta = t;
    }
    for (double& v : x) v = std::max(0.0, v - theta);
}

/// Nearest point of Conv(ys) to x (accelerated projected gradient on the
/// barycentric weights).
Point project_hull(const std::vector<Point>& ys, const Point& x) {
    const std::size_t k = ys.size(), d = x.size();
    Matrix gram(k, k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            double s = 0.0;
            for (std::size_t r = 0; r < d; ++r) s += (ys[a][r] - x[r]) * (ys[b][r] - x[r]);
            gram(a, b) = s;
        }
    double lip = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        double s = 0.0;
        for (std::size_t b = 0; b < k; ++b) s += std::abs(gram(a, b));
        lip = std::max(lip, s);
    }
    std::vector<double> mu(k, 1.0 / static_cast<double>(k));
    if (lip > 0.0) {
        std::vector<double> y = mu, prev = mu, grad(k);
        double tk = 1.0;
        for (int it = 0; it < 5000; ++it) {
            for (std::size_t a = 0; a < k; ++a) {
                double s = 0.0;
                for (std::size_t b = 0; b < k; ++b) s += gram(a, b) * y[b];
                grad[a] = s;
            }
            for (std::size_t a = 0; a < k; ++a) mu[a] = y[a] - grad[a] / lip;
            project_simplex(mu);
            const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
            for (std::size_t a = 0; a < k; ++a) y[a] = mu[a] + (tk - 1.0) / tn * (mu[a] - prev[a]);
            prev = mu;
            tk = tn;
        }
    }
    Point q(d, 0.0);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t r = 0; r < d; ++r) q[r] += mu[a] * ys[a][r];
    return q;
}

double image_diameter(const ExtensionProblem& pb) {
    double diam = 0.0;
    for (std::size_t a = 0; a < pb.images().size(); ++a)
        for (std::size_t b = a + 1; b < pb.images().size(); ++b)
            diam = std::max(diam, lp_distance(pb.images()[a], pb.images()[b], Norm::euclidean()));
    return diam;
}

SolverCertificate make_certificate(const ExtensionProblem& pb, const SolverConfig& cfg, const std::vector<double>& w,
                                   double value) {
    Objective obj(pb);
    SolverCertificate cert;
    std::vector<std::size_t> active;
    for (std::size_t c = 0; c < obj.constraints().size(); ++c) {
        const Constraint& con = obj.constraints()[c];
        const double v = obj.value(con, w);
        cert.slacks.push_back({con.both_new, con.i, con.j, v, value - v});
        if (v >= value * (1.0 - 1e-6)) active.push_back(c);
    }
    cert.active = active.size();
    if (value == 0.0 || active.empty()) {
        cert.certified = true;
        return cert;
    }
    const double diam = image_diameter(pb);
    const double scale = (diam > 0.0 ? diam : 1.0) / value;
    Rng rng(Rng::derive(cfg.seed, 1000));
    std::vector<double> h(w.size());
    cert.worst_direction = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < cfg.certificate_directions; ++s) {
        double nh = 0.0;
        for (double& x : h) {
            x = rng.normal();
            nh += x * x;
        }
        nh = std::sqrt(nh);
        for (double& x : h) x /= nh;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t c : active) best = std::max(best, obj.directional(obj.constraints()[c], w, h));
        cert.worst_direction = std::min(cert.worst_direction, best * scale);
    }
    cert.certified = cert.worst_direction >= -1e-4;
    return cert;
}

} // namespace

double extension_objective(const ExtensionProblem& problem, const std::vector<Point>& w) {
    if (w.size() != problem.m()) throw ValidationError("expected one value per new point");
    std::vector<double> flat;
    for (const Point& p : w) {
        if (p.size() != problem.image_dimension()) throw ValidationError("extension value has the wrong dimension");
        flat.insert(flat.end(), p.begin(), p.end());
    }
    Objective obj(problem);
    return obj.evaluate(flat).first;
}

SolveResult solve_min_lipschitz_extension(const ExtensionProblem& problem, const SolverConfig& config) {
    if (config.restarts == 0) throw ValidationError("solver needs at least one restart");
    const std::size_t m = problem.m(), d = problem.image_dimension();
    SolveResult res;
    if (m == 0) {
        res.optimal_lip = problem.lip_f();
        res.certificate.certified = true;
        return res;
    }

    Point bary(d, 0.0);
    for (const Point& y : problem.images())
        for (std::size_t r = 0; r < d; ++r) bary[r] += y[r] / static_cast<double>(problem.images().size());
    const double radius = config.jitter * image_diameter(problem);

    std::vector<std::vector<double>> starts(config.restarts);
    for (std::size_t r = 0; r < config.restarts; ++r) {
        std::vector<double> w(m * d);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t c = 0; c < d; ++c) w[i * d + c] = bary[c];
        if (r > 0) {
            Rng rng(Rng::derive(config.seed, r));
            for (double& x : w) x += rng.uniform(-radius, radius);
        }
        starts[r] = std::move(w);
    }
    auto run = [&](std::size_t r) { return run_restart(problem, config, starts[r]); };
    const std::vector<RestartOutcome> outcomes = config.exec == Execution::parallel
                                                     ? kernels::map_indexed_parallel<RestartOutcome>(config.restarts, run)
                                                     : kernels::map_indexed_serial<RestartOutcome>(config.restarts, run);
    std::size_t best = 0;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        res.iterations += outcomes[r].iterations;
        if (outcomes[r].value < outcomes[best].value) best = r;
    }
    std::vector<double> w = outcomes[best].w;
    double value = outcomes[best].value;
    res.best_restart = best;
    res.cap_hit = outcomes[best].cap_hit;

    // Clamping each coordinate to the bounding box of Im f is 1-Lipschitz per
    // coordinate, so no lp ratio grows.
    Objective obj(problem);
    for (std::size_t c = 0; c < d; ++c) {
        double lo = problem.images().front()[c], hi = lo;
        for (const Point& y : problem.images()) lo = std::min(lo, y[c]), hi = std::max(hi, y[c]);
        for (std::size_t i = 0; i < m; ++i) w[i * d + c] = std::clamp(w[i * d + c], lo, hi);
    }
    value = obj.evaluate(w).first;

    // Pull toward Conv(Im f) along the segment as far as the objective allows.
    std::vector<double> q(w.size());
    for (std::size_t i = 0; i < m; ++i) {
        const Point wi(w.begin() + static_cast<std::ptrdiff_t>(i * d), w.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
        const Point pi = project_hull(problem.images(), wi);
        std::copy(pi.begin(), pi.end(), q.begin() + static_cast<std::ptrdiff_t>(i * d));
    }
    const double allowed = value * (1.0 + 1e-9);
    auto at = [&](double t) {
        std::vector<double> x(w.size());
        for (std::size_t r = 0; r < w.size(); ++r) x[r] = w[r] + t * (q[r] - w[r]);
        return x;
    };
    double t_ok = 0.0;
    if (obj.evaluate(q).first <= allowed) {
        t_ok = 1.0;
    } else {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 40; ++it) {
            const double mid = 0.5 * (lo + hi);
            (obj.evaluate(at(mid)).first <= allowed ? lo : hi) = mid;
        }
        t_ok = lo;
    }
    if (t_ok > 0.0) {
        w = at(t_ok);
        value = obj.evaluate(w).first;
    }

    res.extension_values.assign(m, Point(d));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t c = 0; c < d; ++c) res.extension_values[i][c] = w[i * d + c];
    res.objective = value;
    res.optimal_lip = std::max(problem.lip_f(), value);
    res.certificate = make_certificate(problem, config, w, value);
    if (res.cap_hit) res.certificate.certified = false;
    return res;
}

BoundsReport verify_bounds(const ExtensionProblem& problem, const SolveResult& result,
                           std::optional<double> lower_factor) {
    BoundsReport rep;
    rep.m = problem.m();
    rep.lip_f = problem.lip_f();
    rep.optimal_lip = result.optimal_lip;
    if (rep.lip_f > 0.0)
        rep.ratio = rep.optimal_lip / rep.lip_f;
    else
        rep.ratio = rep.optimal_lip == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    const TransformFunction f = problem.transform().value_or(TransformFunction::identity());
    rep.upper_factor = extension_factor(rep.m, f);
    rep.upper_ok = rep.optimal_lip <= rep.upper_factor * rep.lip_f * (1.0 + 1e-4) + tol::absolute;
    rep.lower_factor = lower_factor;
    if (lower_factor) rep.lower_ok = rep.optimal_lip >= *lower_factor * rep.lip_f * (1.0 - 1e-4);
    rep.passed = rep.upper_ok && rep.lower_ok;
    return rep;
}

Lemma42Certificate lemma42_certificate(std::size_t k) {
    if (k < 1 || k > 3) throw ValidationError("lemma42 certificate supports k in [1, 3], got " + std::to_string(k));
    const WalshInstance inst = walsh_instance(k, Norm::lp(1.0));
    const std::size_t n = inst.columns.front().size();
    Lemma42Certificate cert;
    cert.k = k;
    cert.orthants = std::size_t{1} << n;
    mpq_class best(-1);

    for (std::size_t mask = 0; mask < cert.orthants; ++mask) {
        // w = sigma u, u >= 0. |v_lr - w_r| = |sigma_r v_lr - u_r| is 1 + u_r
        // when sigma_r v_lr = -1. Otherwise write its epigraph variable as
        // t = 1 - u_r + 2 s with s >= 0 and s >= u_r - 1, which keeps every
        // right-hand side non-negative.
        std::vector<int> sigma(n);
        for (std::size_t r = 0; r < n; ++r) sigma[r] = (mask >> r) & 1U ? -1 : 1;
        std::vector<std::vector<std::size_t>> svar(inst.columns.size(), std::vector<std::size_t>(n, 0));
        std::size_t vars = n;
        for (std::size_t l = 0; l < inst.columns.size(); ++l)
            for (std::size_t r = 0; r < n; ++r)
                if (sigma[r] * inst.columns[l][r] > 0) svar[l][r] = vars++;

        LinearProgram lp;
        lp.c.assign(vars, mpq_class(0));
        for (std::size_t r = 0; r < n; ++r) lp.c[r] = 1;
        for (std::size_t l = 0; l < inst.columns.size(); ++l) {
            std::vector<mpq_class> sum(vars, mpq_class(0));
            for (std::size_t r = 0; r < n; ++r) {
                if (svar[l][r]) {
                    sum[r] -= 1;
                    sum[svar[l][r]] = 2;
                    std::vector<mpq_class> kink(vars, mpq_class(0));  // u_r - s <= 1
                    kink[r] = 1;
                    kink[svar[l][r]] = -1;
                    lp.a.push_back(std::move(kink));
                    lp.b.emplace_back(1);
                } else {
                    sum[r] += 1;
                }
            }
            lp.a.push_back(std::move(sum));
            lp.b.emplace_back(0);
        }
        const LpSolution sol = maximize(lp);
        cert.pivots += sol.pivots;
        if (sol.status == LpStatus::unbounded) throw NumericalError("orthant LP is unbounded");
        if (sol.status != LpStatus::optimal) continue;
        ++cert.feasible_orthants;
        if (sol.value > best) best = sol.value;
    }
    if (cert.feasible_orthants == 0) throw NumericalError("every orthant LP is infeasible, but w = 0 is feasible");
    cert.max_l1 = best.get_d();
    cert.exact_zero = best == 0;
    return cert;
}

} // namespace lipext
