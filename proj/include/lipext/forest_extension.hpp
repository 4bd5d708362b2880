#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lipext/metric_core.hpp"

namespace lipext {

/// Extension problem: X a finite metric space, f: S -> Y Lipschitz, and
/// T = X \ S the points to fill in (m = |T|).
struct ExtensionInstance {
    MetricSpace space;
    PointMap f;  // domain is S
    TargetSpace target;
    double epsilon = 0.0;

    /// Validates S nonempty (S = X is allowed), indices in range, epsilon >= 0, and
    /// that the map kind matches the target.
    void validate() const;
    std::vector<std::size_t> new_points() const;  // T, ascending
    std::size_t m() const { return space.size() - f.size(); }
};

struct ForestEdge {
    std::size_t u;  // u < v
    std::size_t v;
    double weight;

    friend bool operator==(const ForestEdge&, const ForestEdge&) = default;
};

/// Result of anchor selection: the anchor set F plus, for each new point,
/// the anchor that witnessed d(z, x) <= (1 + eps) d(z, S).
struct AnchorSelection {
    std::vector<std::size_t> anchors;                // F, ascending
    std::vector<std::size_t> witness;                // witness[i] for new_points()[i]
    std::vector<double> distance_to_subset;          // d(z, S) for new_points()[i]
};

/// Forest on F and T: acyclic, and no path joins two distinct anchors.
struct AdmissibleForest {
    std::vector<std::size_t> anchors;      // F
    std::vector<std::size_t> new_points;   // T
    std::vector<ForestEdge> edges;         // E_N, in acceptance order
    std::vector<std::size_t> anchor_of;    // x_z, indexed like new_points
    std::vector<ForestEdge> rejected;      // edges refused, in stream order
};

/// The edge stream E sorted by (weight, smaller endpoint, larger endpoint):
/// all pairs inside T plus all pairs T x F.
std::vector<ForestEdge> candidate_edges(const MetricSpace& space, const std::vector<std::size_t>& new_points,
                                        const std::vector<std::size_t>& anchors);

/// For each z in T, the smallest-index s in S with d(z, s) <= (1+eps) d(z, S).
AnchorSelection select_anchors(const ExtensionInstance& instance);

/// Greedy construction: walk the sorted edge stream and accept an edge iff
/// the accepted set stays admissible. Throws NumericalError if a new point is
/// left without an anchor.
AdmissibleForest build_admissible_forest(const ExtensionInstance& instance, const AnchorSelection& anchors);

/// Vertices along the unique forest path from z to its anchor (z first).
std::vector<std::size_t> anchor_path(const AdmissibleForest& forest, std::size_t z);

struct ExtensionResult {
    PointMap values;  // full map on X, domain 0..n-1
    double lip_f = 0.0;
    double achieved_lip = 0.0;
    double certified_bound = 0.0;  // ((1+eps) m + 1) Lip(f)
    AdmissibleForest forest;
};

/// F(s) = f(s) on S and F(z) = f(x_z) on T.
ExtensionResult extend(const ExtensionInstance& instance);

struct CertificationReport {
    bool passed = false;
    bool agrees_on_subset = false;
    bool values_in_image = false;
    double lip_f = 0.0;
    double achieved_lip = 0.0;
    double bound = 0.0;     // ((1+eps) m + 1) Lip(f), recomputed
    double ratio = 0.0;     // achieved / Lip(f); 1 when Lip(f) = 0 and F is constant
    std::size_t m = 0;
};

/// Recomputes Lip(f) and Lip(F) with the serial kernel and checks
/// Lip(F) <= ((1+eps) m + 1) Lip(f) (relative slack 1e-9).
CertificationReport certify(const ExtensionResult& result, const ExtensionInstance& instance);

} // namespace lipext
