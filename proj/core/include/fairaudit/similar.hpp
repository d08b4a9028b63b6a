#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairaudit/metrics.hpp"
#include "fairaudit/subgroups.hpp"

namespace fairaudit {

/// Jensen-Shannon divergence in bits, in [0, 1]. Both inputs must cover the
/// same vocabulary and sum to 1 within 1e-9.
double js_divergence(std::span<const double> p, std::span<const double> q);

/// A feature whose constraint differs between two predicate groups. An
/// absent side means the feature is unconstrained in that group.
struct ValueChange {
    std::size_t feature = 0;
    std::optional<ValueCode> from;
    std::optional<ValueCode> to;
};

struct SimilarityResult {
    std::string source_id;
    std::string candidate_id;
    /// Sum of the per-feature divergences.
    double distance = 0.0;
    std::vector<double> per_feature;
    std::size_t most_divergent_feature = 0;
    /// Present iff both groups are predicate groups.
    std::optional<std::vector<ValueChange>> counterfactual_delta;
};

/// Summed per-feature JS divergence between two non-empty groups.
SimilarityResult subgroup_distance(const Subgroup& source, const Subgroup& candidate, const FeatureSchema& schema);

struct SimilarQuery {
    std::string sort_metric = "accuracy";
    SortOrder order = SortOrder::worst_first;
    std::size_t min_size = default_min_size;
    std::size_t limit = 10;
};

/// Nearest candidates to `source_id` within `universe` by distance, the
/// `limit` closest kept, then presented by `sort_metric` in `order`
/// (undefined last, distance breaking ties). Empty candidates are skipped.
std::vector<SimilarityResult> find_similar(std::string_view source_id, std::span<const GroupRef> universe,
                                           const SimilarQuery& query, const FeatureSchema& schema,
                                           const MetricRegistry& registry);

struct CounterfactualNeighbor {
    GroupRef group;
    std::vector<ValueChange> changes;
    MetricValue value;
    /// |metric(source) - metric(neighbor)|, undefined if either side is.
    MetricValue delta;
};

/// Predicate groups reached by replacing the values of exactly `radius`
/// constrained features (radius 1 or 2), ranked by descending |delta|,
/// undefined deltas last, ties in enumeration order.
std::vector<CounterfactualNeighbor> counterfactual_neighbors(const Subgroup& source, int radius,
                                                             std::string_view metric, const DataTable& table,
                                                             const FeatureSchema& schema,
                                                             const MetricRegistry& registry);

}  // namespace fairaudit
