#include "lipext/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "lipext/error.hpp"
#include "lipext/forest_extension.hpp"
#include "lipext/generators.hpp"
#include "lipext/hilbert_extension.hpp"
#include "lipext/io.hpp"
#include "lipext/kernels.hpp"
#include "lipext/mmatrix.hpp"
#include "lipext/quadform.hpp"
#include "lipext/transforms.hpp"

namespace lipext {

namespace {

using io::format_double;
using nlohmann::json;

struct Context {
    Rng rng;
    std::optional<double> override_tol;
    double tol(double fallback) const { return override_tol.value_or(fallback); }
};

double rel_gap(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

void criterion_path_sharpness(CriterionResult& r, Context& ctx) {
    const double t = ctx.tol(1e-12);
    double worst = 0.0;
    r.passed = true;
    for (std::size_t m = 1; m <= 10; ++m) {
        const MetricSpace p = path_space(m + 1);
        ExtensionInstance inst{p, PointMap({0, m + 1}, PointMap::IndexImages{0, m + 1}), TargetSpace(p), 0.0};
        const ExtensionResult res = extend(inst);
        const double ratio = res.achieved_lip / res.lip_f;
        const double err = std::abs(ratio - static_cast<double>(m + 1));
        worst = std::max(worst, err);
        r.passed &= err <= t * static_cast<double>(m + 1);
        r.details["ratios"].push_back(ratio);
    }
    r.measured = "ratio = m+1 for m=1..10, max abs error " + format_double(worst);
}

void criterion_forest_bound(CriterionResult& r, Context& ctx) {
    const double t = ctx.tol(1e-9);
    double worst = 0.0;
    std::size_t failures = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const ExtensionInstance inst = random_extension_instance(ctx.rng, 14);
        const ExtensionResult res = extend(inst);
        const CertificationReport rep = certify(res, inst);
        const double m1 = static_cast<double>(rep.m + 1);
        const bool ok = rep.achieved_lip <= m1 * rep.lip_f * (1.0 + t) && rep.agrees_on_subset && rep.values_in_image;
        if (!ok) ++failures;
        worst = std::max(worst, rep.ratio / m1);
    }
    r.passed = failures == 0;
    r.details = {{"instances", 500}, {"failures", failures}, {"max_ratio_over_m_plus_1", worst}};
    r.measured = "500 instances, max ratio/(m+1) = " + format_double(worst) + ", failures " + std::to_string(failures);
}

/// 2 sum_{i in J, k in J^c} lambda_ik ||x_k||^2, the size of the terms that
/// cancel in the linear-solve route.
double quad_scale(const QuadInstance& q) {
    double s = 0.0;
    for (std::size_t i : q.free_set())
        for (std::size_t k : q.anchor_set())
            for (double c : q.points()[k]) s += q.weights()(i, k) * c * c;
    return 2.0 * s;
}

/// Relative gap, with differences below 1e-12 * scale treated as zero.
double scaled_gap(double a, double b, double scale) {
    if (std::abs(a - b) <= tol::absolute * scale) return 0.0;
    return rel_gap(a, b);
}

void criterion_quadform(CriterionResult& r, Context& ctx) {
    const double t = ctx.tol(1e-6);
    const double t_sum = ctx.tol(1e-9);
    std::vector<QuadInstance> instances;
    for (int trial = 0; trial < 500; ++trial)
        instances.push_back(random_quad_instance(ctx.rng, 1 + ctx.rng.index(4), 1 + ctx.rng.index(5), 1 + ctx.rng.index(3)));
    struct Row {
        double gap_linear = 0.0, gap_descent = 0.0, sum_residual = 0.0, abs_diff = 0.0;
        bool converged = false;
        std::string error;
    };
    const auto rows = kernels::map_indexed_parallel<Row>(instances.size(), [&](std::size_t i) {
        Row row;
        try {
            const double cf = closed_form_minimum(instances[i]);
            const OracleResult o = oracle_minimum(instances[i]);
            const double scale = quad_scale(instances[i]);
            row.gap_linear = scaled_gap(cf, o.value, scale);
            row.gap_descent = scaled_gap(cf, o.descent_value, scale);
            row.abs_diff = std::max(std::abs(cf - o.value), std::abs(cf - o.descent_value));
            row.converged = o.descent_converged;
            for (double v : sum_to_one_check(instances[i])) row.sum_residual = std::max(row.sum_residual, v);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        return row;
    });
    double g1 = 0.0, g2 = 0.0, s = 0.0, diff = 0.0;
    std::size_t failures = 0;
    for (const Row& row : rows) {
        diff = std::max(diff, row.abs_diff);
        g1 = std::max(g1, row.gap_linear);
        g2 = std::max(g2, row.gap_descent);
        s = std::max(s, row.sum_residual);
        if (!row.error.empty() || !row.converged || row.gap_linear > t || row.gap_descent > t || row.sum_residual > t_sum)
            ++failures;
    }
    r.passed = failures == 0;
    r.details = {{"instances", 500}, {"failures", failures}, {"max_gap_linear_solve", g1},
                 {"max_gap_descent", g2}, {"max_sum_to_one_residual", s}, {"max_abs_difference", diff}};
    r.measured = "max rel gap solve " + format_double(g1) + ", descent " + format_double(g2) + ", sum-to-one " +
                 format_double(s) + ", max abs difference " + format_double(diff);
}

std::vector<MMatrixBundle> criterion4_bundles(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<MMatrixBundle> out;
    for (int i = 0; i < 1000; ++i) out.push_back(random_m_bundle(rng, 2, 8));
    return out;
}

void criterion_inverse_inequality(CriterionResult& r, Context& ctx, std::uint64_t bundle_seed) {
    const double t = ctx.tol(1e-9);
    const auto bundles = criterion4_bundles(bundle_seed);
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t failures = 0, pairs = 0;
    for (const auto& b : bundles) {
        const std::size_t m = b.m.rows();
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t l = 0; l < m; ++l) {
                if (k == l) continue;
                const Theorem61Check c = theorem61_check(b, k, l);
                ++pairs;
                if (!(c.lhs <= c.rhs * (1.0 + t) + 1e-12)) ++failures;
                if (c.rhs > 0.0) worst = std::max(worst, (c.lhs - c.rhs) / c.rhs);
            }
    }
    double eq_gap = 0.0;
    for (std::size_t m = 2; m <= 8; ++m) {
        const MMatrixBundle b = tridiagonal_example(m);
        const Theorem61Check c = theorem61_check(b, 0, m - 1);
        const double expected = static_cast<double>(m - 1) / determinant(b.m);
        const double gap = std::max(rel_gap(c.lhs, expected), rel_gap(c.rhs, expected));
        eq_gap = std::max(eq_gap, gap);
        if (gap > t) ++failures;
        r.details["tridiagonal_lhs"].push_back(c.lhs);
    }
    r.passed = failures == 0;
    r.details["bundles"] = bundles.size();
    r.details["pairs"] = pairs;
    r.details["failures"] = failures;
    r.details["max_relative_excess"] = worst;
    r.details["tridiagonal_max_gap"] = eq_gap;
    r.measured = std::to_string(pairs) + " pairs, max (lhs-rhs)/rhs " + format_double(worst) +
                 ", equality gap " + format_double(eq_gap);
}

void criterion_row_sums(CriterionResult& r, Context& ctx, std::uint64_t bundle_seed) {
    const double t = ctx.tol(1e-9);
    const auto bundles = criterion4_bundles(bundle_seed);
    double worst = 0.0;
    std::size_t failures = 0;
    for (const auto& b : bundles) {
        const std::size_t m = b.m.rows();
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t l = 0; l < m; ++l) {
                if (k == l) continue;
                const ZeroRowSumCheck c = zero_row_sum_check(b, k, l);
                worst = std::max(worst, c.max_residual() / std::max(1.0, c.scale));
                if (!c.holds(t)) ++failures;
            }
    }
    r.passed = failures == 0;
    r.details = {{"failures", failures}, {"max_scaled_residual", worst}};
    r.measured = "max scaled residual " + format_double(worst);
}

void criterion_sign_pattern(CriterionResult& r, Context& ctx) {
    std::size_t failures = 0, pairs = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t m = 2 + ctx.rng.index(5);
        const Matrix a = random_generic_nonnegative(ctx.rng, m);
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t l = 0; l < m; ++l) {
                if (k == l) continue;
                ++pairs;
                if (!sign_pattern_signature(a, k, l).distinct) ++failures;
            }
    }
    r.passed = failures == 0;
    r.details = {{"matrices", 1000}, {"pairs", pairs}, {"failures", failures}};
    r.measured = std::to_string(pairs) + " (k,l) pairs, " + std::to_string(failures) + " without distinct counts";
}

void criterion_jacobi(CriterionResult& r, Context& ctx) {
    const double t = ctx.tol(1e-8);
    double worst = 0.0;
    std::size_t failures = 0, checks = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t m = 1 + ctx.rng.index(6);
        const Matrix a = random_invertible(ctx.rng, m);
        for (std::size_t size = 0; size <= m; ++size) {
            const auto I = random_subset(ctx.rng, m, size);
            const auto J = random_subset(ctx.rng, m, size);
            const double res = jacobi_residual(a, I, J);
            worst = std::max(worst, res);
            ++checks;
            if (res > t) ++failures;
        }
    }
    r.passed = failures == 0;
    r.details = {{"matrices", 1000}, {"checks", checks}, {"failures", failures}, {"max_residual", worst}};
    r.measured = std::to_string(checks) + " minors, max relative residual " + format_double(worst);
}

void criterion_walsh(CriterionResult& r, Context& ctx) {
    const double t = ctx.tol(1e-4);
    const double t_exact = ctx.tol(1e-12);
    r.passed = true;
    double previous = 0.0;
    std::ostringstream m;
    m << "ratios";
    for (std::size_t k = 1; k <= 4; ++k) {
        const Norm p = Norm::euclidean();
        const ExtensionProblem pb = walsh_problem(k, p);
        SolverConfig cfg;
        cfg.seed = Rng::derive(ctx.rng.next(), k);
        const SolveResult res = solve_min_lipschitz_extension(pb, cfg);
        const double lip_expected = std::sqrt(std::ldexp(1.0, static_cast<int>(k) - 1));
        const double ratio = res.optimal_lip / pb.lip_f();
        const double lower = walsh_lower_bound(k, p);
        const bool lip_ok = rel_gap(pb.lip_f(), lip_expected) <= t_exact && rel_gap(walsh_lip(k, p), lip_expected) <= t_exact;
        const bool in_range = ratio >= lower * (1.0 - t) && ratio <= std::sqrt(2.0) * (1.0 + t);
        const bool monotone = ratio >= previous;
        r.passed &= lip_ok && in_range && monotone && res.certificate.certified;
        previous = ratio;
        r.details["k"].push_back(k);
        r.details["lip_f"].push_back(pb.lip_f());
        r.details["ratio"].push_back(ratio);
        r.details["lower"].push_back(lower);
        r.details["certified"].push_back(res.certificate.certified);
        m << ' ' << format_double(ratio);
    }
    r.details["sqrt2"] = std::sqrt(2.0);
    m << " (k=1..4), gap to sqrt(2) at k=4: " << format_double(std::sqrt(2.0) - previous);
    r.measured = m.str();
}

void criterion_lemma42(CriterionResult& r, Context& ctx) {
    const double t = ctx.tol(1e-9);
    r.passed = true;
    std::ostringstream m;
    m << "max ||w||_1 =";
    for (std::size_t k = 1; k <= 3; ++k) {
        const Lemma42Certificate c = lemma42_certificate(k);
        r.passed &= c.exact_zero && std::abs(c.max_l1) <= t;
        r.details["max_l1"].push_back(c.max_l1);
        r.details["orthants"].push_back(c.orthants);
        r.details["pivots"].push_back(c.pivots);
        m << ' ' << format_double(c.max_l1);
    }
    m << " for k=1..3 (exact rational LPs)";
    r.measured = m.str();
}

void criterion_transforms(CriterionResult& r, Context& ctx) {
    const double t_beta = ctx.tol(0.02);
    const double t = ctx.tol(1e-9);
    r.passed = true;
    double worst_beta = 0.0;
    for (double theta : {0.1, 0.25, 0.5, 0.75, 1.0}) {
        const IndexEstimate e = upper_index(TransformFunction::power(theta));
        const double err = std::abs(e.value - theta);
        worst_beta = std::max(worst_beta, err);
        r.passed &= err <= t_beta;
        r.details["beta"].push_back(e.value);
    }
    const double ef = extension_factor(1, TransformFunction::identity());
    const auto table = cf_lower_bound_table(TransformFunction::power(0.5), 16);
    const double row16 = table.back().bound;
    r.passed &= rel_gap(ef, std::sqrt(2.0)) <= t && std::abs(row16 - 4.0) <= t * 4.0;
    r.details["extension_factor_1_identity"] = ef;
    r.details["cf_bound_m16_sqrt"] = row16;
    r.measured = "max |beta - theta| " + format_double(worst_beta) + ", factor(1,id) " + format_double(ef) +
                 ", cf row m=16 " + format_double(row16);
}

struct Definition {
    int id;
    const char* name;
    const char* module;
    std::optional<double> limit;
};

const std::vector<Definition>& definitions() {
    static const std::vector<Definition> defs = {
        {1, "forest extension sharpness on paths", "forest_extension", 1.0},
        {2, "forest extension (m+1) bound on random metrics", "forest_extension", 30.0},
        {3, "quadratic form closed form vs oracles", "quadform", 60.0},
        {4, "inverse M-matrix inequality", "mmatrix", 60.0},
        {5, "zero row-sum identities", "mmatrix", std::nullopt},
        {6, "pair-minor sign pattern distinctness", "mmatrix", 30.0},
        {7, "Jacobi complementary minor identity", "mmatrix", std::nullopt},
        {8, "Walsh sandwich", "hilbert_extension", 120.0},
        {9, "Walsh l1 ball certificate", "hilbert_extension", 10.0},
        {10, "transform indices", "transforms", std::nullopt},
    };
    return defs;
}

} // namespace

std::vector<int> criterion_ids() {
    std::vector<int> ids;
    for (const auto& d : definitions()) ids.push_back(d.id);
    return ids;
}

std::vector<int> select_criteria(const std::vector<std::string>& only) {
    if (only.empty()) return criterion_ids();
    std::vector<int> ids;
    for (const std::string& token : only) {
        bool matched = false;
        for (const auto& d : definitions()) {
            if (token == d.module || token == std::to_string(d.id)) {
                ids.push_back(d.id);
                matched = true;
            }
        }
        if (!matched) throw ValidationError("--only: '" + token + "' is neither a criterion id (1-10) nor a module name");
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
    const auto& defs = definitions();
    const auto it = std::find_if(defs.begin(), defs.end(), [&](const Definition& d) { return d.id == id; });
    if (it == defs.end()) throw ValidationError("no acceptance criterion " + std::to_string(id));
    CriterionResult r;
    r.id = id;
    r.name = it->name;
    r.module = it->module;
    r.limit_seconds = it->limit;
    r.details = json::object();
    Context ctx{Rng(Rng::derive(options.seed, static_cast<std::uint64_t>(id))), options.tolerance};
    const std::uint64_t bundle_seed = Rng::derive(options.seed, 4);

    const auto start = std::chrono::steady_clock::now();
    try {
        switch (id) {
            case 1: criterion_path_sharpness(r, ctx); break;
            case 2: criterion_forest_bound(r, ctx); break;
            case 3: criterion_quadform(r, ctx); break;
            case 4: criterion_inverse_inequality(r, ctx, bundle_seed); break;
            case 5: criterion_row_sums(r, ctx, bundle_seed); break;
            case 6: criterion_sign_pattern(r, ctx); break;
            case 7: criterion_jacobi(r, ctx); break;
            case 8: criterion_walsh(r, ctx); break;
            case 9: criterion_lemma42(r, ctx); break;
            case 10: criterion_transforms(r, ctx); break;
        }
    } catch (const std::exception& e) {
        r.passed = false;
        r.measured = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.limit_seconds && r.seconds > *r.limit_seconds) {
        r.passed = false;
        r.measured += " [over the " + format_double(*r.limit_seconds) + " s limit]";
    }
    return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
    std::vector<CriterionResult> out;
    for (int id : select_criteria(options.only)) out.push_back(run_criterion(id, options));
    return out;
}

std::string format_result_line(const CriterionResult& r) {
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
    return std::string(r.passed ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.name + ": " + r.measured +
           " (" + secs + " s)";
}

} // namespace lipext
