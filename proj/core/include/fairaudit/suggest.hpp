#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "fairaudit/kmeans.hpp"
#include "fairaudit/metrics.hpp"
#include "fairaudit/subgroups.hpp"

namespace fairaudit {

/// Number of dominant features shown on a group card and in exports.
inline constexpr std::size_t card_feature_count = 5;

/// One cluster-kind spec per cluster, named "Cluster 1".."Cluster k".
std::vector<SubgroupSpec> cluster_specs(const ClusterModel& model);

std::vector<Subgroup> clusters_to_subgroups(const ClusterModel& model, const DataTable& table,
                                            const FeatureSchema& schema, const MetricRegistry& registry);

/// Shannon entropy in bits of a count vector; undefined when all counts are zero.
MetricValue entropy_bits(std::span<const std::uint64_t> counts);

/// Entropy of `feature` within the group described by `distribution`.
MetricValue feature_entropy(const FeatureDistribution& distribution, std::size_t feature);

struct DominantFeature {
    std::size_t feature = 0;
    double entropy = 0.0;
    /// Most frequent value; ties go to the lexicographically smallest text.
    ValueCode value = 0;
    double fraction = 0.0;
};

/// Every feature ranked by ascending entropy (ties keep schema order).
/// Throws InvalidArgumentError for an empty group.
std::vector<DominantFeature> dominant_features(const FeatureDistribution& distribution, const FeatureSchema& schema);

/// Groups with at least `min_size` members sorted by `metric` in `order`,
/// undefined values last. Ties keep input order.
std::vector<GroupRef> rank_suggestions(std::span<const GroupRef> groups, std::string_view metric,
                                       std::size_t min_size, const MetricRegistry& registry,
                                       SortOrder order = SortOrder::worst_first);

}  // namespace fairaudit
