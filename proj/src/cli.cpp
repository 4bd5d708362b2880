#include "lipext/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lipext/acceptance.hpp"
#include "lipext/error.hpp"
#include "lipext/forest_extension.hpp"
#include "lipext/hilbert_extension.hpp"
#include "lipext/io.hpp"
#include "lipext/mmatrix.hpp"
#include "lipext/quadform.hpp"
#include "lipext/transforms.hpp"
#include "lipext/version.hpp"

namespace lipext::cli {

namespace {

using ojson = nlohmann::ordered_json;
using io::format_double;

struct Globals {
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string output;
    std::optional<double> tolerance;
};

/// What a subcommand produces: a JSON result and, for CSV output, a table.
struct Outcome {
    ojson params = ojson::object();
    ojson result = ojson::object();
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    int code = exit_ok;
};

ojson number(double x) {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

ojson point_json(const Point& p) {
    ojson a = ojson::array();
    for (double x : p) a.push_back(number(x));
    return a;
}

ojson matrix_json(const Matrix& m) {
    ojson a = ojson::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ojson row = ojson::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
        a.push_back(std::move(row));
    }
    return a;
}

std::vector<std::size_t> parse_index_list(const std::string& text, const std::string& flag) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw ValidationError(flag + ": empty entry in '" + text + "'");
        const std::string tok = item.substr(b, e - b + 1);
        if (tok.find_first_not_of("0123456789") != std::string::npos)
            throw ValidationError(flag + ": '" + tok + "' is not a non-negative integer");
        out.push_back(std::stoull(tok));
    }
    if (out.empty()) throw ValidationError(flag + " needs at least one index");
    return out;
}

std::vector<std::size_t> json_indices(const ojson& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_array()) throw ValidationError("missing array field '" + key + "'");
    std::vector<std::size_t> out;
    for (const auto& v : j[key]) {
        if (!v.is_number_unsigned()) throw ValidationError("field '" + key + "' must hold non-negative integers");
        out.push_back(v.get<std::size_t>());
    }
    return out;
}

std::vector<Point> json_points(const ojson& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_array()) throw ValidationError("missing array field '" + key + "'");
    std::vector<Point> out;
    for (const auto& row : j[key]) {
        if (!row.is_array()) throw ValidationError("field '" + key + "' must be an array of coordinate arrays");
        Point p;
        for (const auto& v : row) {
            if (!v.is_number()) throw ValidationError("field '" + key + "' has a non-numeric coordinate");
            p.push_back(v.get<double>());
        }
        out.push_back(std::move(p));
    }
    return out;
}

ojson read_ojson(const std::string& path) { return ojson::parse(io::read_file(path)); }

Matrix ojson_matrix(const ojson& j, const std::string& what) {
    return io::matrix_from_json(nlohmann::json::parse(j.dump()));
    (void)what;
}

MetricSpace load_space(const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
        return make_metric(io::matrix_from_csv(io::read_file(path)));
    return make_metric(io::space_from_json(io::read_json_file(path)));
}

Norm parse_norm(const std::string& text) { return Norm::parse(text); }

TransformFunction transform_from_flags(const std::string& spec, const std::string& family, double theta, double a) {
    if (!spec.empty()) return TransformFunction::parse(spec);
    if (family == "identity") return TransformFunction::identity();
    if (family == "power") return TransformFunction::power(theta);
    if (family == "saturating") return TransformFunction::saturating(a);
    throw ValidationError("--family must be identity, power or saturating, got '" + family + "'");
}

// ---------------------------------------------------------------- extend-forest

struct ForestArgs {
    std::string space, subset, map;
    std::size_t path_n = 0;
    double epsilon = 0.0;
};

Outcome cmd_extend_forest(const ForestArgs& a, const Globals& g) {
    Outcome o;
    if (a.space.empty() == (a.path_n == 0)) throw ValidationError("give exactly one of --space FILE or --path-n N");
    const MetricSpace space = a.path_n ? path_space(a.path_n) : load_space(a.space);
    const std::vector<std::size_t> subset = parse_index_list(a.subset, "--subset");

    std::optional<PointMap> f;
    TargetSpace target = QuasiMetricSpace(space);
    if (a.map.empty()) {
        f.emplace(subset, PointMap::IndexImages(subset));
    } else {
        const ojson m = read_ojson(a.map);
        if (!m.contains("images") || !m["images"].is_array()) throw ValidationError("map file needs an 'images' array");
        const bool coords = !m["images"].empty() && m["images"][0].is_array();
        if (m["images"].size() != subset.size())
            throw ValidationError("map has " + std::to_string(m["images"].size()) + " images but --subset has " +
                                  std::to_string(subset.size()) + " points");
        if (coords) {
            Norm p = Norm::euclidean();
            if (m.contains("target_p")) {
                const auto& tp = m["target_p"];
                p = tp.is_string() ? Norm::parse(tp.get<std::string>()) : Norm::lp(tp.get<double>());
            }
            target = p;
            f.emplace(subset, json_points(m, "images"));
        } else {
            if (m.contains("target")) target = io::space_from_json(nlohmann::json::parse(m["target"].dump()));
            f.emplace(subset, json_indices(m, "images"));
        }
    }
    const double slack = g.tolerance.value_or(tol::relative);
    o.params = {{"space", a.path_n ? "path:" + std::to_string(a.path_n) : a.space},
                {"subset", subset},
                {"map", a.map.empty() ? "identity" : a.map},
                {"epsilon", a.epsilon},
                {"tolerance", slack}};

    ExtensionInstance inst{space, *f, target, a.epsilon};
    const ExtensionResult res = extend(inst);
    const CertificationReport rep = certify(res, inst);
    const bool bound_ok = rep.achieved_lip <= rep.bound * (1.0 + slack);
    const bool certified = bound_ok && rep.agrees_on_subset && rep.values_in_image;

    ojson edges = ojson::array();
    for (const ForestEdge& e : res.forest.edges) edges.push_back({{"u", e.u}, {"v", e.v}, {"weight", e.weight}});
    ojson anchor_of = ojson::array();
    for (std::size_t i = 0; i < res.forest.new_points.size(); ++i)
        anchor_of.push_back({res.forest.new_points[i], res.forest.anchor_of[i]});
    ojson values = ojson::array();
    const std::size_t n = space.size();
    if (res.values.index_valued()) {
        o.header = {"x", "value"};
        for (std::size_t x = 0; x < n; ++x) {
            values.push_back(res.values.index_images()[x]);
            o.rows.push_back({std::to_string(x), std::to_string(res.values.index_images()[x])});
        }
    } else {
        o.header = {"x"};
        for (std::size_t c = 0; c < res.values.coordinate_images().front().size(); ++c)
            o.header.push_back("c" + std::to_string(c));
        for (std::size_t x = 0; x < n; ++x) {
            values.push_back(point_json(res.values.coordinate_images()[x]));
            std::vector<std::string> row{std::to_string(x)};
            for (double v : res.values.coordinate_images()[x]) row.push_back(format_double(v));
            o.rows.push_back(std::move(row));
        }
    }
    o.result = {{"n", n},
                {"m", rep.m},
                {"lip_f", number(rep.lip_f)},
                {"achieved_lip", number(rep.achieved_lip)},
                {"certified_bound", number(rep.bound)},
                {"ratio", number(rep.ratio)},
                {"certified", certified},
                {"anchors", res.forest.anchors},
                {"anchor_of", anchor_of},
                {"edges", edges},
                {"rejected_edges", res.forest.rejected.size()},
                {"values", values}};
    o.code = certified ? exit_ok : exit_numerical;
    return o;
}

// ---------------------------------------------------------------- extend-hilbert

struct HilbertArgs {
    std::string problem;
    std::string target_p = "2";
    std::string source_p = "2";
    std::string transform = "identity";
    std::size_t restarts = 5;
    std::size_t max_iterations = 200'000;
};

ojson bounds_json(const ExtensionProblem& pb, const SolveResult& res, std::optional<double> lower, bool& ok) {
    const TransformFunction f = pb.transform().value_or(TransformFunction::identity());
    if (!pb.source().is_infinite() && pb.source().p() == 2.0 && f.flags().strictly_increasing &&
        f.flags().concave_in_sqrt) {
        const BoundsReport b = verify_bounds(pb, res, lower);
        ok = b.passed;
        ojson j = {{"applicable", true},
                   {"ratio", number(b.ratio)},
                   {"upper_factor", number(b.upper_factor)},
                   {"upper_ok", b.upper_ok}};
        if (b.lower_factor) {
            j["lower_factor"] = number(*b.lower_factor);
            j["lower_ok"] = b.lower_ok;
        }
        j["passed"] = b.passed;
        return j;
    }
    ok = true;
    return {{"applicable", false},
            {"reason", "the upper bound needs a Euclidean source and F strictly increasing with F(sqrt x) concave"}};
}

ojson solve_json(const SolveResult& res) {
    ojson vals = ojson::array();
    for (const Point& p : res.extension_values) vals.push_back(point_json(p));
    ojson slacks = ojson::array();
    for (const ConstraintSlack& s : res.certificate.slacks)
        slacks.push_back({{"pair", s.both_new ? "new-new" : "new-s"},
                          {"i", s.i},
                          {"j", s.j},
                          {"value", number(s.value)},
                          {"slack", number(s.slack)}});
    return {{"optimal_lip", number(res.optimal_lip)},
            {"objective", number(res.objective)},
            {"extension_values", vals},
            {"iterations", res.iterations},
            {"best_restart", res.best_restart},
            {"iteration_cap_hit", res.cap_hit},
            {"certified", res.certificate.certified},
            {"active_constraints", res.certificate.active},
            {"worst_direction", number(res.certificate.worst_direction)},
            {"slacks", slacks}};
}

Outcome cmd_extend_hilbert(const HilbertArgs& a, const Globals& g) {
    Outcome o;
    const ojson pj = read_ojson(a.problem);
    const TransformFunction F = TransformFunction::parse(a.transform);
    std::optional<TransformFunction> tf;
    if (F.family() != TransformFunction::Family::identity) tf = F;
    const ExtensionProblem pb(EuclideanPointSet(json_points(pj, "points")), json_indices(pj, "s"),
                              json_points(pj, "images"), json_indices(pj, "t"), parse_norm(a.target_p), tf,
                              parse_norm(a.source_p));
    SolverConfig cfg;
    cfg.seed = g.seed;
    cfg.restarts = a.restarts;
    cfg.max_iterations = a.max_iterations;
    if (g.tolerance) cfg.tolerance = *g.tolerance;
    o.params = {{"problem", a.problem},   {"target_p", parse_norm(a.target_p).to_string()},
                {"source_p", parse_norm(a.source_p).to_string()}, {"transform", F.describe()},
                {"restarts", a.restarts}, {"max_iterations", a.max_iterations},
                {"tolerance", cfg.tolerance}};
    const SolveResult res = solve_min_lipschitz_extension(pb, cfg);
    bool bounds_ok = true;
    o.result = {{"m", pb.m()}, {"lip_f", number(pb.lip_f())}};
    o.result.update(solve_json(res));
    o.result["bounds"] = bounds_json(pb, res, std::nullopt, bounds_ok);

    o.header = {"t"};
    for (std::size_t c = 0; c < pb.image_dimension(); ++c) o.header.push_back("c" + std::to_string(c));
    for (std::size_t i = 0; i < pb.m(); ++i) {
        std::vector<std::string> row{std::to_string(pb.t()[i])};
        for (double v : res.extension_values[i]) row.push_back(format_double(v));
        o.rows.push_back(std::move(row));
    }
    o.code = res.certificate.certified && bounds_ok ? exit_ok : exit_numerical;
    return o;
}

// ---------------------------------------------------------------- walsh

struct WalshArgs {
    std::size_t k = 0;
    std::string p = "2";
    bool verify = false;
};

Outcome cmd_walsh(const WalshArgs& a, const Globals& g) {
    Outcome o;
    const Norm p = parse_norm(a.p);
    const double tol = g.tolerance.value_or(1e-4);
    o.params = {{"k", a.k}, {"p", p.to_string()}, {"verify_bounds", a.verify}, {"tolerance", tol}};
    const WalshInstance inst = walsh_instance(a.k, p);
    const bool euclid = !p.is_infinite() && p.p() == 2.0;
    o.result = {{"k", a.k},
                {"points", inst.columns.size()},
                {"dimension", inst.columns.front().size()},
                {"lip", number(walsh_lip(a.k, p))},
                {"lower", number(walsh_lower_bound(a.k, p))}};
    o.result["upper"] = euclid ? number(extension_factor(1, TransformFunction::identity())) : ojson(nullptr);
    o.header = {"k", "p", "lip", "lower", "upper"};
    std::vector<std::string> row{std::to_string(a.k), p.to_string(), format_double(walsh_lip(a.k, p)),
                                 format_double(walsh_lower_bound(a.k, p)),
                                 euclid ? format_double(o.result["upper"].get<double>()) : ""};
    if (a.verify) {
        if (a.k > 6) throw ValidationError("--verify-bounds supports k <= 6 (got " + std::to_string(a.k) + ")");
        const ExtensionProblem pb = walsh_problem(a.k, p);
        SolverConfig cfg;
        cfg.seed = g.seed;
        const SolveResult res = solve_min_lipschitz_extension(pb, cfg);
        const double ratio = res.optimal_lip / pb.lip_f();
        const double lower = walsh_lower_bound(a.k, p);
        const bool lip_matches = std::abs(pb.lip_f() - walsh_lip(a.k, p)) <= 1e-9 * walsh_lip(a.k, p);
        const bool lower_ok = ratio >= lower * (1.0 - tol);
        const bool upper_ok = !euclid || ratio <= o.result["upper"].get<double>() * (1.0 + tol);
        o.result["lip_measured"] = number(pb.lip_f());
        o.result["lip_matches"] = lip_matches;
        o.result["solver_ratio"] = number(ratio);
        o.result["lower_ok"] = lower_ok;
        o.result["upper_ok"] = upper_ok;
        o.result["certified"] = res.certificate.certified;
        o.result["solver"] = solve_json(res);
        o.header.insert(o.header.end(), {"solver_ratio", "lower_ok", "upper_ok", "certified"});
        row.insert(row.end(), {format_double(ratio), lower_ok ? "true" : "false", upper_ok ? "true" : "false",
                               res.certificate.certified ? "true" : "false"});
        o.code = lip_matches && lower_ok && upper_ok && res.certificate.certified ? exit_ok : exit_numerical;
    }
    o.rows.push_back(std::move(row));
    return o;
}

// ---------------------------------------------------------------- lemma42

Outcome cmd_lemma42(std::size_t k, const Globals&) {
    Outcome o;
    o.params = {{"k", k}};
    const Lemma42Certificate c = lemma42_certificate(k);
    o.result = {{"k", k},
                {"orthants", c.orthants},
                {"feasible_orthants", c.feasible_orthants},
                {"max_l1", number(c.max_l1)},
                {"exact_zero", c.exact_zero},
                {"pivots", c.pivots}};
    o.header = {"k", "orthants", "max_l1", "exact_zero"};
    o.rows.push_back({std::to_string(k), std::to_string(c.orthants), format_double(c.max_l1),
                      c.exact_zero ? "true" : "false"});
    o.code = c.exact_zero ? exit_ok : exit_numerical;
    return o;
}

// ---------------------------------------------------------------- quadform

struct QuadArgs {
    std::string instance;
    std::string random;
    bool check_oracle = false;
};

ojson quad_instance_json(const QuadInstance& q) {
    ojson pts = ojson::array();
    for (const Point& p : q.points().points()) pts.push_back(point_json(p));
    return {{"points", pts}, {"lambda", matrix_json(q.weights().matrix())}, {"free_set", q.free_set()}};
}

Outcome cmd_quadform(const QuadArgs& a, const Globals& g) {
    Outcome o;
    if (a.instance.empty() == a.random.empty()) throw ValidationError("give exactly one of --instance FILE or --random J,A,D");
    std::optional<QuadInstance> q;
    if (!a.instance.empty()) {
        const ojson j = read_ojson(a.instance);
        if (!j.contains("lambda")) throw ValidationError("instance file needs a 'lambda' matrix");
        q.emplace(EuclideanPointSet(json_points(j, "points")), WeightFunction(ojson_matrix(j["lambda"], "lambda")),
                  json_indices(j, "free_set"));
    } else {
        const auto sizes = parse_index_list(a.random, "--random");
        if (sizes.size() != 3 || sizes[0] == 0 || sizes[1] == 0 || sizes[2] == 0)
            throw ValidationError("--random expects three positive integers J,A,D (free points, anchors, dimension)");
        Rng rng(g.seed);
        q.emplace(random_quad_instance(rng, sizes[0], sizes[1], sizes[2]));
    }
    const double tol = g.tolerance.value_or(1e-6);
    o.params = {{"instance", a.instance.empty() ? "random:" + a.random : a.instance},
                {"check_oracle", a.check_oracle},
                {"tolerance", tol}};
    const double cf = closed_form_minimum(*q);
    const std::vector<double> residuals = sum_to_one_check(*q);
    const double max_res = residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
    o.result = {{"closed_form", number(cf)}, {"sum_to_one_max_residual", number(max_res)}};
    o.header = {"closed_form", "sum_to_one_max_residual"};
    std::vector<std::string> row{format_double(cf), format_double(max_res)};
    bool ok = max_res <= 1e-9;
    if (a.check_oracle) {
        const OracleResult orc = oracle_minimum(*q);
        const bool routes = std::abs(orc.value - orc.descent_value) <= tol * (1.0 + std::abs(orc.value));
        const bool closed = std::abs(orc.value - cf) <= tol * (1.0 + std::abs(orc.value));
        ojson argmin = ojson::array();
        for (const Point& p : orc.argmin) argmin.push_back(point_json(p));
        o.result["oracle"] = number(orc.value);
        o.result["descent"] = number(orc.descent_value);
        o.result["descent_iterations"] = orc.descent_iterations;
        o.result["descent_converged"] = orc.descent_converged;
        o.result["routes_agree"] = routes;
        o.result["closed_form_agrees"] = closed;
        o.result["argmin"] = argmin;
        o.header.insert(o.header.end(), {"oracle", "descent", "agree"});
        row.insert(row.end(), {format_double(orc.value), format_double(orc.descent_value),
                               routes && closed ? "true" : "false"});
        ok = ok && routes && closed && orc.descent_converged;
    }
    if (!a.random.empty()) o.result["instance"] = quad_instance_json(*q);
    o.rows.push_back(std::move(row));
    o.code = ok ? exit_ok : exit_numerical;
    return o;
}

// ---------------------------------------------------------------- mmatrix

struct MMatrixArgs {
    std::string file;
    std::string checks = "classify,thm61,lemma64";
    std::size_t k = 0, l = 0;  // 1-based, 0 = all pairs
    std::size_t m = 0;
};

ojson classification_json(const MatrixClassification& c) {
    return {{"verdict", c.verdict()},
            {"square", c.square},
            {"symmetric", c.symmetric},
            {"off_diagonal_nonpositive", c.off_diagonal_nonpositive},
            {"strictly_diagonally_dominant", c.strictly_diagonally_dominant},
            {"invertible", c.invertible},
            {"inverse_nonnegative", c.inverse_nonnegative}};
}

std::vector<std::pair<std::size_t, std::size_t>> pair_list(std::size_t m, std::size_t k, std::size_t l) {
    if ((k == 0) != (l == 0)) throw ValidationError("give both --k and --l, or neither to check every pair");
    if (k) {
        if (k > m || l > m) throw ValidationError("--k/--l are 1-based and must be <= " + std::to_string(m));
        if (k == l) throw ValidationError("--k and --l must differ");
        return {{k - 1, l - 1}};
    }
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (i != j) out.emplace_back(i, j);
    return out;
}

Outcome cmd_mmatrix_verify(const MMatrixArgs& a, const Globals& g) {
    Outcome o;
    const ojson j = read_ojson(a.file);
    const Matrix M = ojson_matrix(j.is_object() ? j.at("matrix") : j, "matrix");
    if (!M.square() || M.rows() < 2) throw ValidationError("matrix must be square with at least 2 rows");
    std::vector<std::string> checks;
    {
        std::stringstream ss(a.checks);
        std::string c;
        while (std::getline(ss, c, ',')) checks.push_back(c);
    }
    static const std::vector<std::string> known = {"classify", "thm61",  "lemma64", "cor65",
                                                   "jacobi",   "generic", "lemma67", "ordering"};
    for (const auto& c : checks)
        if (std::find(known.begin(), known.end(), c) == known.end())
            throw ValidationError("unknown check '" + c +
                                  "' (expected classify, thm61, lemma64, cor65, jacobi, generic, lemma67, ordering)");
    const double tol = g.tolerance.value_or(1e-9);
    const double jacobi_tol = g.tolerance.value_or(1e-8);
    o.params = {{"file", a.file}, {"checks", checks}, {"k", a.k}, {"l", a.l}, {"tolerance", tol}};

    const MMatrixBundle b = make_bundle(M);
    const std::size_t m = M.rows();
    const auto pairs = pair_list(m, a.k, a.l);
    bool all = true;
    o.header = {"check", "k", "l", "value", "holds"};
    auto row = [&](const std::string& name, std::size_t k, std::size_t l, double v, bool holds) {
        o.rows.push_back({name, std::to_string(k + 1), std::to_string(l + 1), format_double(v), holds ? "true" : "false"});
    };
    o.result["inverse"] = matrix_json(b.c);
    o.result["inverse_residual"] = number(b.inverse_residual);
    for (const std::string& c : checks) {
        ojson r = ojson::array();
        if (c == "classify") {
            o.result["classify"] = classification_json(b.flags);
            o.rows.push_back({"classify", "", "", b.flags.verdict(), b.flags.is_m_matrix() ? "true" : "false"});
            continue;
        }
        if (c == "jacobi") {
            if (m > 8) throw ValidationError("jacobi check enumerates all minors and needs m <= 8");
            double worst = 0.0;
            std::size_t count = 0;
            for (std::size_t ri = 0; ri < (std::size_t{1} << m); ++ri)
                for (std::size_t ci = 0; ci < (std::size_t{1} << m); ++ci) {
                    if (__builtin_popcountll(ri) != __builtin_popcountll(ci)) continue;
                    std::vector<std::size_t> I, J;
                    for (std::size_t t = 0; t < m; ++t) {
                        if (ri >> t & 1U) I.push_back(t);
                        if (ci >> t & 1U) J.push_back(t);
                    }
                    worst = std::max(worst, jacobi_residual(M, I, J));
                    ++count;
                }
            const bool holds = worst <= jacobi_tol;
            all &= holds;
            o.result["jacobi"] = {{"minors", count}, {"max_residual", number(worst)}, {"holds", holds}};
            o.rows.push_back({"jacobi", "", "", format_double(worst), holds ? "true" : "false"});
            continue;
        }
        if (c == "generic") {
            const GenericityCheck gc = is_generic(M);
            ojson gj = {{"generic", gc.generic}, {"minors_checked", gc.minors_checked}};
            if (gc.first_failure) gj["first_failure"] = {{"rows", gc.first_failure->first}, {"cols", gc.first_failure->second}};
            o.result["generic"] = gj;
            o.rows.push_back({"generic", "", "", std::to_string(gc.minors_checked), gc.generic ? "true" : "false"});
            continue;
        }
        for (const auto& [k, l] : pairs) {
            if (c == "thm61") {
                const Theorem61Check t = theorem61_check(b, k, l);
                const bool holds = t.lhs <= t.rhs * (1.0 + tol) + tol::absolute;
                all &= holds;
                r.push_back({{"k", k + 1}, {"l", l + 1}, {"lhs", number(t.lhs)}, {"rhs", number(t.rhs)}, {"holds", holds}});
                row(c, k, l, t.lhs - t.rhs, holds);
            } else if (c == "lemma64") {
                const ZeroRowSumCheck z = zero_row_sum_check(b, k, l);
                const bool holds = z.holds(tol);
                all &= holds;
                r.push_back({{"k", k + 1}, {"l", l + 1}, {"first_residual", number(z.first_residual)},
                             {"max_residual", number(z.max_residual())}, {"scale", number(z.scale)}, {"holds", holds}});
                row(c, k, l, z.max_residual(), holds);
            } else if (c == "cor65") {
                const ZeroPatternCheck z = zero_pattern_check(b, k, l);
                const char* status = z.status == ZeroPatternCheck::Status::pass   ? "pass"
                                     : z.status == ZeroPatternCheck::Status::fail ? "fail"
                                                                                  : "inapplicable";
                all &= z.status != ZeroPatternCheck::Status::fail;
                r.push_back({{"k", k + 1}, {"l", l + 1}, {"status", status}, {"row_or_column", z.row_or_column},
                             {"row_or_row", z.row_or_row}, {"enough_zeros", z.enough_zeros},
                             {"zero_entries", z.zero_entries}});
                o.rows.push_back({c, std::to_string(k + 1), std::to_string(l + 1), status,
                                  z.status == ZeroPatternCheck::Status::fail ? "false" : "true"});
            } else if (c == "lemma67") {
                // C for an M-matrix, otherwise the (non-negative) input itself
                const SignPatternSignature s = sign_pattern_signature(b.flags.is_m_matrix() ? b.c : M, k, l);
                all &= s.distinct;
                r.push_back({{"k", k + 1}, {"l", l + 1}, {"positive_counts", s.positive_counts}, {"distinct", s.distinct}});
                row(c, k, l, static_cast<double>(s.positive_counts.size()), s.distinct);
            } else if (c == "ordering") {
                const SignOrderingCheck s = sign_ordering_check(b, k, l);
                const bool holds = s.row_k_nonnegative && s.row_l_nonpositive;
                all &= holds;
                r.push_back({{"k", k + 1}, {"l", l + 1}, {"row_k_nonnegative", s.row_k_nonnegative},
                             {"row_l_nonpositive", s.row_l_nonpositive}});
                o.rows.push_back({c, std::to_string(k + 1), std::to_string(l + 1), "", holds ? "true" : "false"});
            }
        }
        o.result[c] = r;
    }
    o.result["all_hold"] = all;
    o.code = all ? exit_ok : exit_numerical;
    return o;
}

Outcome cmd_mmatrix_tridiagonal(const MMatrixArgs& a, const Globals&) {
    Outcome o;
    o.params = {{"m", a.m}};
    const MMatrixBundle b = tridiagonal_example(a.m);
    const double det = determinant(b.m);
    const Theorem61Check t = theorem61_check(b, 0, a.m - 1);
    const double expected = static_cast<double>(a.m - 1) / det;
    o.result = {{"m", a.m},
                {"matrix", matrix_json(b.m)},
                {"inverse", matrix_json(b.c)},
                {"determinant", number(det)},
                {"classify", classification_json(b.flags)},
                {"c_1m", number(b.c(0, a.m - 1))},
                {"inverse_determinant", number(1.0 / det)},
                {"lhs", number(t.lhs)},
                {"rhs", number(t.rhs)},
                {"expected", number(expected)}};
    for (std::size_t j = 0; j < a.m; ++j) o.header.push_back("c" + std::to_string(j));
    for (std::size_t i = 0; i < a.m; ++i) {
        std::vector<std::string> row;
        for (std::size_t j = 0; j < a.m; ++j) row.push_back(format_double(b.m(i, j)));
        o.rows.push_back(std::move(row));
    }
    return o;
}

// ---------------------------------------------------------------- transforms

struct TransformArgs {
    std::string transform;
    std::string family = "power";
    double theta = 0.5;
    double a = 1.0;
    double grid_max = 0x1.0p40;
    std::size_t samples = 4096;
    std::size_t n_max = 64;
};

Outcome cmd_transform_index(const TransformArgs& a, const Globals&) {
    Outcome o;
    const TransformFunction f = transform_from_flags(a.transform, a.family, a.theta, a.a);
    SampleGrid grid;
    grid.samples = a.samples;
    o.params = {{"transform", f.describe()}, {"grid_max", a.grid_max}, {"samples", a.samples}};
    const IndexEstimate e = upper_index(f, a.grid_max, grid);
    ojson alphas = ojson::array(), iterates = ojson::array();
    for (double x : e.alphas) alphas.push_back(number(x));
    for (double x : e.iterates) iterates.push_back(number(x));
    o.result = {{"beta", number(e.value)},        {"diagnostic", number(e.diagnostic)},
                {"converged", e.converged},       {"grid_max", number(e.grid_max)},
                {"samples", e.samples},           {"alphas", alphas},
                {"iterates", iterates},           {"warnings", check_declared_flags(f, grid)}};
    o.header = {"alpha", "estimate"};
    for (std::size_t i = 0; i < e.alphas.size(); ++i)
        o.rows.push_back({format_double(e.alphas[i]), format_double(e.iterates[i])});
    o.code = e.converged ? exit_ok : exit_numerical;
    return o;
}

Outcome cmd_cf_table(const TransformArgs& a, const Globals&) {
    Outcome o;
    const TransformFunction f = transform_from_flags(a.transform, a.family, a.theta, a.a);
    if (a.n_max == 0) throw ValidationError("--n-max must be at least 1");
    SampleGrid grid;
    grid.samples = a.samples;
    o.params = {{"transform", f.describe()}, {"n_max", a.n_max}, {"samples", a.samples}};
    ojson rows = ojson::array();
    o.header = {"m", "D_F", "bound"};
    for (const CfBoundRow& r : cf_lower_bound_table(f, a.n_max, grid)) {
        rows.push_back({{"m", r.m}, {"D_F", number(r.dilation)}, {"bound", number(r.bound)}});
        o.rows.push_back({std::to_string(r.m), format_double(r.dilation), format_double(r.bound)});
    }
    o.result = {{"rows", rows}};
    return o;
}

// ---------------------------------------------------------------- suite

struct SuiteArgs {
    std::string name = "paper-tables";
    std::string only;
    bool timings = false;
};

Outcome cmd_suite(const SuiteArgs& a, const Globals& g) {
    Outcome o;
    if (a.name != "paper-tables") throw ValidationError("unknown suite '" + a.name + "' (only 'paper-tables' exists)");
    AcceptanceOptions opt;
    opt.seed = g.seed ? g.seed : opt.seed;
    opt.tolerance = g.tolerance;
    if (!a.only.empty()) {
        std::stringstream ss(a.only);
        std::string t;
        while (std::getline(ss, t, ',')) opt.only.push_back(t);
    }
    o.params = {{"suite", a.name}, {"only", opt.only}, {"acceptance_seed", opt.seed}};
    o.params["tolerance_override"] = g.tolerance ? number(*g.tolerance) : ojson(nullptr);
    const std::vector<CriterionResult> results = run_acceptance(opt);
    bool all = true;
    ojson list = ojson::array();
    o.header = {"id", "name", "module", "passed", "measured"};
    for (const CriterionResult& r : results) {
        all &= r.passed;
        ojson j = {{"id", r.id}, {"name", r.name}, {"module", r.module}, {"passed", r.passed}, {"measured", r.measured}};
        j["within_time_limit"] = !r.limit_seconds || r.seconds <= *r.limit_seconds;
        j["time_limit_seconds"] = r.limit_seconds ? number(*r.limit_seconds) : ojson(nullptr);
        if (a.timings) j["seconds"] = r.seconds;
        j["details"] = ojson::parse(r.details.dump());
        list.push_back(std::move(j));
        o.rows.push_back({std::to_string(r.id), r.name, r.module, r.passed ? "true" : "false", r.measured});
    }
    o.result = {{"criteria", list}, {"all_passed", all}};
    o.code = all ? exit_ok : exit_failed;
    return o;
}

// ---------------------------------------------------------------- output

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string render(const Outcome& o, const std::string& command, const Globals& g) {
    if (g.format == "csv") {
        std::string s;
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + csv_field(cells[i]);
            s += '\n';
        };
        line(o.header);
        for (const auto& r : o.rows) line(r);
        return s;
    }
    ojson doc = {{"tool", tool_name},      {"version", tool_version}, {"command", command},
                 {"params", o.params},     {"seed", g.seed},          {"exit_code", o.code},
                 {"result", o.result}};
    return doc.dump(2) + "\n";
}

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = {"extend-forest", "extend-hilbert", "walsh",   "lemma42", "quadform",
                                                   "mmatrix",       "transform-index", "cf-table", "suite"};
    return names;
}

/// The first positional token, skipping global options and their values.
std::optional<std::string> first_positional(const std::vector<std::string>& args) {
    static const std::vector<std::string> valued = {"--seed", "--format", "--output", "--tolerance"};
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("-", 0) == 0) {
            if (std::find(valued.begin(), valued.end(), a) != valued.end()) ++i;
            continue;
        }
        return a;
    }
    return std::nullopt;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lipschitz extension toolkit: forest extensions, quadratic-form minima, "
                 "M-matrix inequalities, Walsh instances and metric transforms",
                 tool_name};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    Globals g;
    std::optional<double> tolerance_flag;
    app.add_option("--seed", g.seed, "seed for every randomized step (default 0)");
    app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--output", g.output, "write the result to this file instead of stdout");
    app.add_option("--tolerance", tolerance_flag, "comparison tolerance of the command's checks");

    ForestArgs fa;
    auto* forest = app.add_subcommand("extend-forest", "extend f: S -> Y to X by the admissible-forest construction");
    forest->add_option("--space", fa.space, "metric space file ({\"n\", \"dist\"} JSON or CSV matrix)");
    forest->add_option("--path-n", fa.path_n, "use the path space {0, ..., N} instead of --space");
    forest->add_option("--subset", fa.subset, "comma-separated indices of S, e.g. \"0,2\"")->required();
    forest->add_option("--map", fa.map, "map JSON; omitted means f = identity into X");
    forest->add_option("--epsilon", fa.epsilon, "anchor slack epsilon >= 0");

    HilbertArgs ha;
    auto* hilbert = app.add_subcommand("extend-hilbert", "minimum-Lipschitz extension from a Euclidean source into l_p");
    hilbert->add_option("--problem", ha.problem, "problem JSON {points, s, images, t}")->required();
    hilbert->add_option("--target-p", ha.target_p, "target norm p in [1, inf]");
    hilbert->add_option("--source-p", ha.source_p, "source norm p (default 2)");
    hilbert->add_option("--transform", ha.transform, "identity, power:T or saturating:A on source distances");
    hilbert->add_option("--restarts", ha.restarts, "solver restarts")->check(CLI::PositiveNumber);
    hilbert->add_option("--max-iterations", ha.max_iterations, "iteration cap per restart")->check(CLI::PositiveNumber);

    WalshArgs wa;
    auto* walsh = app.add_subcommand("walsh", "Walsh instance Lipschitz constant and one-point bounds");
    walsh->add_option("--k", wa.k, "level k in [1, 10]")->required()->check(CLI::Range(1, 10));
    walsh->add_option("--p", wa.p, "source norm p in [1, inf]");
    walsh->add_flag("--verify-bounds", wa.verify, "solve the origin extension and check both bounds");

    std::size_t lemma_k = 3;
    auto* lemma = app.add_subcommand("lemma42", "exact LP certificate that only w = 0 fits inside every Walsh l1 ball");
    lemma->add_option("--k", lemma_k, "level k in [1, 3]")->check(CLI::Range(1, 3));

    QuadArgs qa;
    auto* quad = app.add_subcommand("quadform", "closed-form minimum of the weighted quadratic form");
    quad->add_option("--instance", qa.instance, "instance JSON {points, lambda, free_set}");
    quad->add_option("--random", qa.random, "random instance J,A,D (free points, anchors, dimension) from --seed");
    quad->add_flag("--check-oracle", qa.check_oracle, "compare against the linear-solve and descent oracles");

    MMatrixArgs ma;
    auto* mm = app.add_subcommand("mmatrix", "M-matrix classification and inverse identities");
    mm->require_subcommand(1);
    auto* verify = mm->add_subcommand("verify", "run checks on a matrix file");
    verify->add_option("--file", ma.file, "matrix JSON {\"matrix\": [[...]]}")->required();
    verify->add_option("--checks", ma.checks,
                       "comma list of classify, thm61, lemma64, cor65, jacobi, generic, lemma67, ordering "
                       "(lemma67 runs on M^-1 for an M-matrix, else on M)");
    verify->add_option("--k", ma.k, "1-based row/column index k (default: all pairs)");
    verify->add_option("--l", ma.l, "1-based row/column index l");
    auto* tri = mm->add_subcommand("tridiagonal", "the tridiagonal 3/-1 example and its equality case");
    tri->add_option("--m", ma.m, "size m >= 2")->required()->check(CLI::Range(2, 64));

    TransformArgs ta;
    auto add_transform_flags = [&](CLI::App* sub) {
        sub->add_option("--transform", ta.transform, "transform spec, e.g. power:0.5 (overrides --family)");
        sub->add_option("--family", ta.family, "identity, power or saturating");
        sub->add_option("--theta", ta.theta, "exponent for --family power");
        sub->add_option("--a", ta.a, "level for --family saturating");
        sub->add_option("--samples", ta.samples, "x samples per dilation evaluation")->check(CLI::Range(2, 1 << 20));
    };
    auto* tindex = app.add_subcommand("transform-index", "estimate the upper index beta(F)");
    add_transform_flags(tindex);
    tindex->add_option("--grid-max", ta.grid_max, "largest dilation alpha of the schedule 2^4, 2^8, ...");
    auto* cft = app.add_subcommand("cf-table", "rows m, D_F(m), m / D_F(m)");
    add_transform_flags(cft);
    cft->add_option("--n-max", ta.n_max, "largest m");

    SuiteArgs sa;
    auto* suite = app.add_subcommand("suite", "run the acceptance experiments and report pass/fail");
    suite->add_option("name", sa.name, "suite name (paper-tables)");
    suite->add_option("--only", sa.only, "comma list of criterion ids or module names");
    suite->add_flag("--timings", sa.timings, "include wall-clock seconds (output is then not reproducible)");

    const auto sub = first_positional(args);
    if (sub && std::find(subcommands().begin(), subcommands().end(), *sub) == subcommands().end()) {
        err << "error: unknown subcommand '" << *sub << "'; run 'lipext --help' for the list" << std::endl;
        return exit_validation;
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForVersion&) {
        out << tool_name << ' ' << tool_version << '\n';
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "; run 'lipext --help'" << std::endl;
        return exit_validation;
    }
    g.tolerance = tolerance_flag;
    if (g.tolerance && !(*g.tolerance >= 0.0)) {
        err << "error: --tolerance must be >= 0" << std::endl;
        return exit_validation;
    }

    std::string command;
    Outcome o;
    try {
        if (forest->parsed()) {
            command = "extend-forest";
            o = cmd_extend_forest(fa, g);
        } else if (hilbert->parsed()) {
            command = "extend-hilbert";
            o = cmd_extend_hilbert(ha, g);
        } else if (walsh->parsed()) {
            command = "walsh";
            o = cmd_walsh(wa, g);
        } else if (lemma->parsed()) {
            command = "lemma42";
            o = cmd_lemma42(lemma_k, g);
        } else if (quad->parsed()) {
            command = "quadform";
            o = cmd_quadform(qa, g);
        } else if (verify->parsed()) {
            command = "mmatrix verify";
            o = cmd_mmatrix_verify(ma, g);
        } else if (tri->parsed()) {
            command = "mmatrix tridiagonal";
            o = cmd_mmatrix_tridiagonal(ma, g);
        } else if (tindex->parsed()) {
            command = "transform-index";
            o = cmd_transform_index(ta, g);
        } else if (cft->parsed()) {
            command = "cf-table";
            o = cmd_cf_table(ta, g);
        } else if (suite->parsed()) {
            command = "suite";
            o = cmd_suite(sa, g);
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << std::endl;
        return exit_validation;
    } catch (const InfiniteLipschitzError& e) {
        err << "error: " << e.what() << std::endl;
        return exit_validation;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed JSON input: " << e.what() << std::endl;
        return exit_validation;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << std::endl;
        return exit_numerical;
    }

    const std::string text = render(o, command, g);
    if (g.output.empty()) {
        out << text;
    } else {
        std::ofstream f(g.output, std::ios::binary);
        if (!f || !(f << text)) {
            err << "error: cannot write '" << g.output << "'" << std::endl;
            return exit_validation;
        }
    }
    if (o.code == exit_numerical) err << "warning: result is not certified (exit 3)" << std::endl;
    return o.code;
}

} // namespace lipext::cli
