#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace lipext {

struct CriterionResult {
    int id = 0;
    std::string name;
    std::string module;            // used by --only filters
    bool passed = false;
    std::string measured;          // one-line summary of the measured values
    double seconds = 0.0;
    std::optional<double> limit_seconds;
    nlohmann::json details;        // per-check values
};

struct AcceptanceOptions {
    std::uint64_t seed = 20240611;
    /// Replaces every comparison tolerance of every criterion.
    std::optional<double> tolerance;
    /// Criterion ids or module names; empty runs everything.
    std::vector<std::string> only;
};

/// Ids 1..10 in order.
std::vector<int> criterion_ids();
/// Throws ValidationError for an --only token that names nothing.
std::vector<int> select_criteria(const std::vector<std::string>& only);

/// A failure to meet the runtime limit counts as a failed criterion.
CriterionResult run_criterion(int id, const AcceptanceOptions& options);
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// "PASS [3] name: measured (1.23 s)"
std::string format_result_line(const CriterionResult& r);

} // namespace lipext
