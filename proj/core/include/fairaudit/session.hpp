#pragma once

#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fairaudit/ingest.hpp"
#include "fairaudit/kmeans.hpp"
#include "fairaudit/metrics.hpp"
#include "fairaudit/similar.hpp"
#include "fairaudit/subgroups.hpp"
#include "fairaudit/suggest.hpp"

namespace fairaudit {

/// A completed clustering run and its materialized suggestions.
struct Clustering {
    ClusterConfig config;
    ClusterModel model;
    std::vector<GroupRef> groups;
};

/// One loaded dataset plus every group the analyst has in play.
///
/// The dataset, one-hot matrix and registry are frozen at construction.
/// Group registration and re-clustering take an exclusive lock; readers see
/// the last complete clustering until a new one is swapped in.
class AuditSession {
public:
    /// Without a cluster config the session starts with no suggestions.
    AuditSession(std::string id, LoadResult loaded, const std::optional<ClusterConfig>& cluster,
                 std::shared_ptr<const MetricRegistry> registry);

    const std::string& id() const { return id_; }
    const FeatureSchema& schema() const { return schema_; }
    const DataTable& table() const { return table_; }
    const OneHotMatrix& matrix() const { return matrix_; }
    const MetricRegistry& registry() const { return *registry_; }
    std::size_t input_rows() const { return input_rows_; }
    std::size_t dropped_rows() const { return dropped_rows_; }

    const ConfusionCounts& dataset_counts() const { return dataset_counts_; }
    MetricValue dataset_average(std::string_view metric) const;
    const FeatureDistribution& dataset_distribution() const { return dataset_distribution_; }

    /// Cartesian-product generation; groups are registered and returned in product order.
    std::vector<GroupRef> generate(const FeatureSelection& selection);
    GroupRef add_predicate(std::vector<Constraint> constraints);

    std::shared_ptr<const Clustering> clustering() const;
    void recluster(const ClusterConfig& config);

    /// Throws NotFoundError for unknown ids.
    GroupRef find(std::string_view id) const;
    std::vector<GroupRef> user_groups() const;
    /// User groups followed by the current suggestions.
    std::vector<GroupRef> universe() const;

    std::vector<GroupRef> suggestions(std::string_view metric, std::size_t min_size, std::size_t limit,
                                      SortOrder order = SortOrder::worst_first) const;
    std::vector<SimilarityResult> similar(std::string_view id, const SimilarQuery& query) const;
    std::vector<CounterfactualNeighbor> counterfactual(std::string_view id, int radius, std::string_view metric) const;

    void set_pinned(std::optional<std::string> id);
    void set_hovered(std::optional<std::string> id);
    std::optional<std::string> pinned() const;
    std::optional<std::string> hovered() const;

private:
    GroupRef register_group(Subgroup group);
    static std::shared_ptr<const Clustering> run_clustering(const ClusterConfig& config, const OneHotMatrix& matrix,
                                                            const DataTable& table, const FeatureSchema& schema,
                                                            const MetricRegistry& registry);

    std::string id_;
    FeatureSchema schema_;
    DataTable table_;
    OneHotMatrix matrix_;
    std::shared_ptr<const MetricRegistry> registry_;
    std::size_t input_rows_ = 0;
    std::size_t dropped_rows_ = 0;
    ConfusionCounts dataset_counts_;
    FeatureDistribution dataset_distribution_;

    mutable std::shared_mutex mutex_;
    std::shared_ptr<const Clustering> clustering_;
    std::vector<GroupRef> user_groups_;
    std::unordered_map<std::string, GroupRef> user_index_;
    std::optional<std::string> pinned_;
    std::optional<std::string> hovered_;
};

}  // namespace fairaudit
