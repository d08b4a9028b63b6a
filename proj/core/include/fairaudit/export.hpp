#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairaudit/metrics.hpp"
#include "fairaudit/session.hpp"
#include "fairaudit/similar.hpp"
#include "fairaudit/subgroups.hpp"
#include "fairaudit/suggest.hpp"

// JSON renderings shared by the HTTP API and the command line tool, so both
// emit identical numbers for identical inputs.

namespace fairaudit {

inline constexpr std::string_view tool_version = "fairaudit 0.1.0";

/// Number, or null when undefined.
nlohmann::json to_json(const MetricValue& value);
nlohmann::json to_json(const ConfusionCounts& counts);
nlohmann::json to_json(const MetricSet& metrics);
/// Only the requested metrics, in the requested order.
nlohmann::json metrics_json(const MetricSet& metrics, std::span<const std::string> ids);

/// {feature: value} for a predicate group.
nlohmann::json constraints_json(const SubgroupSpec& spec, const FeatureSchema& schema);
/// Top `limit` entries of the dominance ranking.
nlohmann::json dominant_json(const FeatureDistribution& distribution, const FeatureSchema& schema,
                             std::size_t limit = card_feature_count);
/// [{feature, values, counts}] over every schema feature.
nlohmann::json distribution_json(const FeatureDistribution& distribution, const FeatureSchema& schema);

/// Export-document entry: id, kind, constraints or dominant_features, size,
/// confusion, metrics, label_balance.
nlohmann::json export_group(const Subgroup& group, const FeatureSchema& schema);

/// {tool_version, dataset_id, groups: [...]}
nlohmann::json export_document(std::string_view dataset_id, std::span<const GroupRef> groups,
                               const FeatureSchema& schema);

/// Card payload: id, name, kind, size, empty flag, requested metrics and,
/// for clusters, the top dominant features.
nlohmann::json group_summary(const Subgroup& group, const FeatureSchema& schema, std::span<const std::string> metrics);

nlohmann::json dataset_averages(const AuditSession& session, std::span<const std::string> metrics);

nlohmann::json value_changes_json(std::span<const ValueChange> changes, const FeatureSchema& schema);

nlohmann::json similarity_json(const SimilarityResult& result, const AuditSession& session,
                               std::span<const std::string> metrics);

nlohmann::json counterfactual_json(const CounterfactualNeighbor& neighbor, const FeatureSchema& schema,
                                   std::span<const std::string> metrics);

/// Full comparison payload for one group: export fields plus name,
/// distributions and label balance.
nlohmann::json detail_json(const Subgroup& group, const FeatureSchema& schema);

}  // namespace fairaudit
