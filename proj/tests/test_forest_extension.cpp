#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "lipext/error.hpp"
#include "lipext/forest_extension.hpp"
#include "lipext/generators.hpp"
#include "lipext/metric_core.hpp"
#include "test_support.hpp"

using namespace lipext;

namespace {

ExtensionInstance path_identity(std::size_t n, std::vector<std::size_t> s) {
    const auto p = path_space(n);
    return {p, PointMap(s, PointMap::IndexImages(s)), QuasiMetricSpace(p), 0.0};
}

/// Union-find cycle search plus anchor-component count, independent of the
/// construction's own bookkeeping.
struct ForestAudit {
    bool acyclic = true;
    bool anchors_separated = true;
    bool every_new_point_anchored = true;
};

ForestAudit audit(const AdmissibleForest& f, std::size_t n) {
    ForestAudit a;
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : f.edges) {
        const auto ru = find(e.u), rv = find(e.v);
        if (ru == rv) a.acyclic = false;
        parent[ru] = rv;
    }
    std::map<std::size_t, std::size_t> anchors_per_root;
    for (std::size_t x : f.anchors) ++anchors_per_root[find(x)];
    for (const auto& [root, count] : anchors_per_root)
        if (count > 1) a.anchors_separated = false;
    for (std::size_t i = 0; i < f.new_points.size(); ++i) {
        const auto r = find(f.new_points[i]);
        if (!anchors_per_root.count(r) || find(f.anchor_of[i]) != r) a.every_new_point_anchored = false;
    }
    return a;
}

} // namespace

TEST_CASE("select_anchors examples") {
    auto a = select_anchors(path_identity(2, {0, 2}));
    CHECK(a.anchors == std::vector<std::size_t>{0});
    CHECK(a.witness == std::vector<std::size_t>{0});

    a = select_anchors(path_identity(3, {0, 3}));
    CHECK(a.anchors == std::vector<std::size_t>{0, 3});
    CHECK(a.witness == std::vector<std::size_t>{0, 3});

    a = select_anchors(path_identity(4, {0, 1, 2, 4}));
    CHECK(a.anchors == std::vector<std::size_t>{2});  // z = 3: d(3,2) = d(3,4) = 1, smallest index wins
    a = select_anchors(path_identity(4, {0, 1, 2, 3}));
    CHECK(a.anchors == std::vector<std::size_t>{3});
}

TEST_CASE("epsilon widens the anchor choice to the smallest admissible index") {
    // P_4, S = {0, 1, 4}: z = 2 has d(2,S) = 1 and d(2,0) = 2 <= (1+1) * 1;
    // z = 3 has d(3,S) = 1 (via 4), d(3,0) = 3 too far, d(3,1) = 2 admissible
    auto inst = path_identity(4, {0, 1, 4});
    inst.epsilon = 1.0;
    const auto a = select_anchors(inst);
    CHECK(a.witness == std::vector<std::size_t>{0, 1});
    CHECK(a.distance_to_subset == std::vector<double>{1.0, 1.0});
}

TEST_CASE("build_admissible_forest examples") {
    auto inst = path_identity(3, {0, 3});
    auto forest = build_admissible_forest(inst, select_anchors(inst));
    REQUIRE(forest.edges.size() == 2);
    CHECK(forest.edges[0] == ForestEdge{0, 1, 1.0});
    CHECK(forest.edges[1] == ForestEdge{1, 2, 1.0});
    CHECK(forest.anchor_of == std::vector<std::size_t>{0, 0});
    REQUIRE_FALSE(forest.rejected.empty());
    CHECK(forest.rejected.front() == ForestEdge{2, 3, 1.0});

    inst = path_identity(2, {0, 2});
    forest = build_admissible_forest(inst, select_anchors(inst));
    REQUIRE(forest.edges.size() == 1);
    CHECK(forest.edges[0] == ForestEdge{0, 1, 1.0});
    CHECK(forest.anchor_of == std::vector<std::size_t>{0});

    inst = path_identity(3, {0, 1, 3});
    forest = build_admissible_forest(inst, select_anchors(inst));
    CHECK(forest.edges.size() == 1);
    CHECK(anchor_path(forest, 2) == std::vector<std::size_t>{2, 1});
}

TEST_CASE("extend examples") {
    auto res = extend(path_identity(2, {0, 2}));
    CHECK(res.values.index_images() == std::vector<std::size_t>{0, 0, 2});
    CHECK(res.achieved_lip == 2.0);
    CHECK(res.certified_bound == 2.0);

    res = extend(path_identity(3, {0, 3}));
    CHECK(res.values.index_images() == std::vector<std::size_t>{0, 0, 0, 3});
    CHECK(res.achieved_lip == 3.0);

    const auto full = path_identity(4, {0, 1, 2, 3, 4});
    res = extend(full);
    CHECK(res.values.index_images() == std::vector<std::size_t>{0, 1, 2, 3, 4});
    CHECK(res.achieved_lip == 1.0);
    CHECK(certify(res, full).ratio == 1.0);
    CHECK(certify(res, full).m == 0);
}

TEST_CASE("sharp path instances reach exactly m+1") {
    for (std::size_t m = 1; m <= 12; ++m) {
        const auto inst = path_identity(m + 1, {0, m + 1});
        const auto rep = certify(extend(inst), inst);
        CHECK(rep.passed);
        CHECK(rep.m == m);
        CHECK(rep.ratio == static_cast<double>(m + 1));
    }
}

TEST_CASE("coordinate-valued targets use the same construction") {
    const auto p = path_space(3);
    const PointMap f({0, 3}, PointMap::CoordinateImages{{0.0, 0.0}, {3.0, 4.0}});
    const ExtensionInstance inst{p, f, Norm::euclidean(), 0.0};
    const auto res = extend(inst);
    CHECK(res.values.coordinate_images()[1] == Point{0.0, 0.0});
    CHECK(res.values.coordinate_images()[2] == Point{0.0, 0.0});  // {2,3} would join the anchors
    const auto rep = certify(res, inst);
    CHECK(rep.passed);
    CHECK(rep.achieved_lip == doctest::Approx(5.0));
    CHECK(rep.lip_f == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("instance validation") {
    const auto p = path_space(4);
    CHECK(test::error_message<ValidationError>([&] {
              extend({p, PointMap({0, 9}, PointMap::IndexImages{0, 1}), QuasiMetricSpace(p), 0.0});
          }) == "index 9 out of range for n=5");
    CHECK_THROWS_AS(extend({p, PointMap({}, PointMap::IndexImages{}), QuasiMetricSpace(p), 0.0}), ValidationError);
    CHECK_THROWS_AS(extend({p, PointMap({0}, PointMap::IndexImages{0}), QuasiMetricSpace(p), -0.5}), ValidationError);
    CHECK_THROWS_AS(extend({p, PointMap({0}, PointMap::IndexImages{7}), QuasiMetricSpace(p), 0.0}), ValidationError);
}

TEST_CASE("random instances: bound, forest invariants, determinism, image") {
    Rng rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        const ExtensionInstance inst = random_extension_instance(rng, 14);
        const auto res = extend(inst);
        const auto rep = certify(res, inst);
        CHECK(rep.passed);
        CHECK(rep.agrees_on_subset);
        CHECK(rep.values_in_image);
        CHECK(rep.achieved_lip <= (rep.m + 1) * rep.lip_f * (1 + 1e-9) + 1e-12);

        const auto& forest = res.forest;
        const auto a = audit(forest, inst.space.size());
        CHECK(a.acyclic);
        CHECK(a.anchors_separated);
        CHECK(a.every_new_point_anchored);

        // replaying the sorted stream reproduces the accepted edges
        std::set<std::pair<std::size_t, std::size_t>> accepted, rejected;
        for (const auto& e : forest.edges) accepted.insert({e.u, e.v});
        for (const auto& e : forest.rejected) rejected.insert({e.u, e.v});
        const auto stream = candidate_edges(inst.space, forest.new_points, forest.anchors);
        std::vector<ForestEdge> replay_order;
        for (const auto& e : stream)
            if (accepted.count({e.u, e.v})) replay_order.push_back(e);
        CHECK(replay_order == forest.edges);
        for (std::size_t i = 1; i < stream.size(); ++i) CHECK(stream[i - 1].weight <= stream[i].weight);

        // anchor path edges are no heavier than the path start's anchor distance
        const auto sel = select_anchors(inst);
        for (std::size_t i = 0; i < forest.new_points.size(); ++i) {
            const auto path = anchor_path(forest, forest.new_points[i]);
            CHECK(path.back() == forest.anchor_of[i]);
            for (std::size_t t = 1; t < path.size(); ++t)
                CHECK(inst.space(path[t - 1], path[t]) <= (1 + inst.epsilon) * sel.distance_to_subset[i] * (1 + 1e-12));
        }

        const auto again = extend(inst);
        CHECK(again.forest.edges == forest.edges);
        CHECK(again.values.index_images() == res.values.index_images());
    }
}
