#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fairaudit/ingest.hpp"
#include "fairaudit/metrics.hpp"

namespace fairaudit {

/// Groups smaller than this are hidden by default in every view.
inline constexpr std::size_t default_min_size = 10;

enum class GroupKind { predicate, cluster };

std::string_view to_string(GroupKind kind);

/// feature == value
struct Constraint {
    std::size_t feature = 0;
    ValueCode value = 0;

    friend auto operator<=>(const Constraint&, const Constraint&) = default;
};

/// Definition of a subgroup: a conjunction of value constraints or an
/// explicit member list. Build through the factory functions so the id and
/// canonical ordering are always set.
struct SubgroupSpec {
    GroupKind kind = GroupKind::predicate;
    /// Sorted by feature index, at most one per feature (predicate kind).
    std::vector<Constraint> constraints;
    /// Sorted ascending (cluster kind).
    std::vector<RowId> member_ids;
    std::string id;
    std::string display_name;

    /// Value constrained on `feature`, if any.
    std::optional<ValueCode> constrained_value(std::size_t feature) const;
};

/// Validates constraints against the schema and derives id and name.
SubgroupSpec make_predicate_spec(const FeatureSchema& schema, std::vector<Constraint> constraints);
SubgroupSpec make_cluster_spec(std::vector<RowId> members, std::string display_name);

/// Parses "feature=value,feature=value" against the schema.
std::vector<Constraint> parse_constraints(const FeatureSchema& schema, std::string_view text);

/// Per-feature value counts N_{k,v} of one group.
struct FeatureDistribution {
    std::uint64_t group_size = 0;
    std::vector<std::vector<std::uint64_t>> counts;

    /// counts / group_size; empty groups yield all zeros.
    std::vector<double> normalized(std::size_t feature) const;
};

FeatureDistribution distribution_of(std::span<const RowId> members, const DataTable& table,
                                    const FeatureSchema& schema);

/// A spec evaluated against the table.
struct Subgroup {
    SubgroupSpec spec;
    std::vector<RowId> members;
    ConfusionCounts counts;
    MetricSet metrics;
    FeatureDistribution distribution;
    MetricValue label_balance;

    std::size_t size() const { return members.size(); }
    bool empty() const { return members.empty(); }
    const std::string& id() const { return spec.id; }
};

using GroupRef = std::shared_ptr<const Subgroup>;

/// Selected values per feature for a Cartesian-product request.
struct FeatureSelection {
    std::vector<std::pair<std::size_t, std::vector<ValueCode>>> features;
};

/// Builds a selection from names. An empty value list selects every value
/// of that feature.
FeatureSelection make_selection(const FeatureSchema& schema,
                                std::span<const std::pair<std::string, std::vector<std::string>>> by_name);

/// One predicate group per element of the product of the selected value sets.
std::vector<SubgroupSpec> generate_product(const FeatureSchema& schema, const FeatureSelection& selection);

std::vector<RowId> members_of(const SubgroupSpec& spec, const DataTable& table);

Subgroup materialize(const SubgroupSpec& spec, const DataTable& table, const FeatureSchema& schema,
                     const MetricRegistry& registry);

/// Order-preserving filter keeping groups with at least `min_size` members.
std::vector<GroupRef> filter_by_size(std::span<const GroupRef> groups, std::size_t min_size);

}  // namespace fairaudit
