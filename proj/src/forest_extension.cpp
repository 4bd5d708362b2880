#include "lipext/forest_extension.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <tuple>

#include "lipext/error.hpp"

namespace lipext {

void ExtensionInstance::validate() const {
    const std::size_t n = space.size();
    if (f.size() == 0) throw ValidationError("subset S must be nonempty");
    for (std::size_t s : f.domain())
        if (s >= n) throw ValidationError("index " + std::to_string(s) + " out of range for n=" + std::to_string(n));
    if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be >= 0");
    if (std::holds_alternative<QuasiMetricSpace>(target)) {
        if (!f.index_valued()) throw ValidationError("finite target space needs an index-valued map");
        const auto& y = std::get<QuasiMetricSpace>(target);
        for (std::size_t v : f.index_images())
            if (v >= y.size())
                throw ValidationError("image index " + std::to_string(v) + " out of range for target n=" +
                                      std::to_string(y.size()));
    } else if (f.index_valued()) {
        throw ValidationError("l_p target needs a coordinate-valued map");
    }
}

std::vector<std::size_t> ExtensionInstance::new_points() const {
    std::vector<bool> in_s(space.size(), false);
    for (std::size_t s : f.domain()) in_s[s] = true;
    std::vector<std::size_t> t;
    for (std::size_t i = 0; i < space.size(); ++i)
        if (!in_s[i]) t.push_back(i);
    return t;
}

std::vector<ForestEdge> candidate_edges(const MetricSpace& space, const std::vector<std::size_t>& new_points,
                                        const std::vector<std::size_t>& anchors) {
    std::vector<ForestEdge> edges;
    auto add = [&](std::size_t a, std::size_t b) {
        edges.push_back({std::min(a, b), std::max(a, b), space(a, b)});
    };
    for (std::size_t i = 0; i < new_points.size(); ++i) {
        for (std::size_t j = i + 1; j < new_points.size(); ++j) add(new_points[i], new_points[j]);
        for (std::size_t a : anchors) add(new_points[i], a);
    }
    std::sort(edges.begin(), edges.end(), [](const ForestEdge& x, const ForestEdge& y) {
        return std::tie(x.weight, x.u, x.v) < std::tie(y.weight, y.u, y.v);
    });
    return edges;
}

AnchorSelection select_anchors(const ExtensionInstance& instance) {
    instance.validate();
    const auto& S = instance.f.domain();
    std::vector<std::size_t> sorted_s = S;
    std::sort(sorted_s.begin(), sorted_s.end());

    AnchorSelection sel;
    for (std::size_t z : instance.new_points()) {
        double dzs = instance.space(z, sorted_s.front());
        for (std::size_t s : sorted_s) dzs = std::min(dzs, instance.space(z, s));
        const double limit = (1.0 + instance.epsilon) * dzs;
        std::size_t chosen = sorted_s.front();
        for (std::size_t s : sorted_s) {
            if (instance.space(z, s) <= limit) {
                chosen = s;
                break;
            }
        }
        sel.witness.push_back(chosen);
        sel.distance_to_subset.push_back(dzs);
        sel.anchors.push_back(chosen);
    }
    std::sort(sel.anchors.begin(), sel.anchors.end());
    sel.anchors.erase(std::unique(sel.anchors.begin(), sel.anchors.end()), sel.anchors.end());
    return sel;
}

namespace {

/// Union-find whose roots remember whether their component holds an anchor.
class AnchoredComponents {
public:
    explicit AnchoredComponents(std::size_t n) : parent_(n), has_anchor_(n, false) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    void mark_anchor(std::size_t v) { has_anchor_[v] = true; }
    std::size_t find(std::size_t v) {
        while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
        return v;
    }
    /// Joins the components of a and b if that keeps the edge set admissible.
    bool try_join(std::size_t a, std::size_t b) {
        const std::size_t ra = find(a), rb = find(b);
        if (ra == rb) return false;                        // cycle
        if (has_anchor_[ra] && has_anchor_[rb]) return false;  // anchor-to-anchor path
        parent_[rb] = ra;
        has_anchor_[ra] = has_anchor_[ra] || has_anchor_[rb];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<bool> has_anchor_;
};

} // namespace

AdmissibleForest build_admissible_forest(const ExtensionInstance& instance, const AnchorSelection& sel) {
    AdmissibleForest forest;
    forest.anchors = sel.anchors;
    forest.new_points = instance.new_points();
    const std::size_t n = instance.space.size();

    AnchoredComponents comps(n);
    for (std::size_t a : forest.anchors) comps.mark_anchor(a);
    for (const ForestEdge& e : candidate_edges(instance.space, forest.new_points, forest.anchors)) {
        if (comps.try_join(e.u, e.v))
            forest.edges.push_back(e);
        else
            forest.rejected.push_back(e);
    }

    std::vector<std::size_t> root_anchor(n, n);
    for (std::size_t a : forest.anchors) root_anchor[comps.find(a)] = a;
    forest.anchor_of.reserve(forest.new_points.size());
    for (std::size_t z : forest.new_points) {
        const std::size_t a = root_anchor[comps.find(z)];
        if (a == n)
            throw NumericalError("internal error: new point " + std::to_string(z) +
                                 " is not connected to any anchor");
        forest.anchor_of.push_back(a);
    }
    return forest;
}

std::vector<std::size_t> anchor_path(const AdmissibleForest& forest, std::size_t z) {
    const auto it = std::find(forest.new_points.begin(), forest.new_points.end(), z);
    if (it == forest.new_points.end()) throw ValidationError("point " + std::to_string(z) + " is not a new point");
    const std::size_t target = forest.anchor_of[static_cast<std::size_t>(it - forest.new_points.begin())];

    std::size_t n = std::max(z, target) + 1;
    for (const ForestEdge& e : forest.edges) n = std::max(n, e.v + 1);
    // The forest path to the anchor is unique, so any search finds it.
    std::vector<std::size_t> pred(n, n);
    pred[z] = z;
    std::vector<std::size_t> frontier{z};
    while (!frontier.empty() && pred[target] == n) {
        const std::size_t v = frontier.back();
        frontier.pop_back();
        for (const ForestEdge& e : forest.edges) {
            const std::size_t w = e.u == v ? e.v : (e.v == v ? e.u : n);
            if (w == n || pred[w] != n) continue;
            pred[w] = v;
            frontier.push_back(w);
        }
    }
    if (pred[target] == n) throw NumericalError("anchor path search failed");
    std::vector<std::size_t> path{target};
    for (std::size_t cur = target; cur != z; cur = pred[cur]) path.push_back(pred[cur]);
    return {path.rbegin(), path.rend()};
}

ExtensionResult extend(const ExtensionInstance& instance) {
    instance.validate();
    ExtensionResult result;
    const AnchorSelection sel = select_anchors(instance);
    result.forest = build_admissible_forest(instance, sel);

    const std::size_t n = instance.space.size();
    const auto& dom = instance.f.domain();
    std::vector<std::size_t> position(n, n);  // index of x in dom
    for (std::size_t i = 0; i < dom.size(); ++i) position[dom[i]] = i;
    for (std::size_t i = 0; i < result.forest.new_points.size(); ++i)
        position[result.forest.new_points[i]] = position[result.forest.anchor_of[i]];

    std::vector<std::size_t> full(n);
    std::iota(full.begin(), full.end(), std::size_t{0});
    if (instance.f.index_valued()) {
        PointMap::IndexImages img(n);
        for (std::size_t x = 0; x < n; ++x) img[x] = instance.f.index_images()[position[x]];
        result.values = PointMap(full, std::move(img));
    } else {
        PointMap::CoordinateImages img(n);
        for (std::size_t x = 0; x < n; ++x) img[x] = instance.f.coordinate_images()[position[x]];
        result.values = PointMap(full, std::move(img));
    }

    result.lip_f = lipschitz_constant(instance.f, instance.space, instance.target);
    result.achieved_lip = lipschitz_constant(result.values, instance.space, instance.target);
    result.certified_bound = ((1.0 + instance.epsilon) * static_cast<double>(instance.m()) + 1.0) * result.lip_f;
    return result;
}

CertificationReport certify(const ExtensionResult& result, const ExtensionInstance& instance) {
    CertificationReport rep;
    rep.m = instance.m();
    rep.lip_f = lipschitz_constant(instance.f, instance.space, instance.target, Execution::serial);
    rep.achieved_lip = lipschitz_constant(result.values, instance.space, instance.target, Execution::serial);
    rep.bound = ((1.0 + instance.epsilon) * static_cast<double>(rep.m) + 1.0) * rep.lip_f;

    const auto& dom = instance.f.domain();
    rep.agrees_on_subset = true;
    rep.values_in_image = true;
    if (instance.f.index_valued()) {
        const auto& fv = instance.f.index_images();
        const auto& Fv = result.values.index_images();
        for (std::size_t i = 0; i < dom.size(); ++i) rep.agrees_on_subset &= Fv[dom[i]] == fv[i];
        for (std::size_t v : Fv) rep.values_in_image &= std::find(fv.begin(), fv.end(), v) != fv.end();
    } else {
        const auto& fv = instance.f.coordinate_images();
        const auto& Fv = result.values.coordinate_images();
        for (std::size_t i = 0; i < dom.size(); ++i) rep.agrees_on_subset &= Fv[dom[i]] == fv[i];
        for (const Point& v : Fv) rep.values_in_image &= std::find(fv.begin(), fv.end(), v) != fv.end();
    }

    if (rep.lip_f > 0.0)
        rep.ratio = rep.achieved_lip / rep.lip_f;
    else
        rep.ratio = rep.achieved_lip == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    const bool bound_ok = rep.achieved_lip <= rep.bound + tol::relative * rep.bound;
    rep.passed = bound_ok && rep.agrees_on_subset && rep.values_in_image;
    return rep;
}

} // namespace lipext
