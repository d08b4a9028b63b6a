#include "fairaudit/suggest.hpp"

#include <algorithm>
#include <cmath>

#include "fairaudit/errors.hpp"

namespace fairaudit {

std::vector<SubgroupSpec> cluster_specs(const ClusterModel& model) {
    auto members = model.members();
    std::vector<SubgroupSpec> specs;
    specs.reserve(members.size());
    for (std::size_t c = 0; c < members.size(); ++c) {
        specs.push_back(make_cluster_spec(std::move(members[c]), "Cluster " + std::to_string(c + 1)));
    }
    return specs;
}

std::vector<Subgroup> clusters_to_subgroups(const ClusterModel& model, const DataTable& table,
                                            const FeatureSchema& schema, const MetricRegistry& registry) {
    if (model.assignments().size() != table.row_count()) {
        throw InvalidArgumentError("cluster assignments do not match the table");
    }
    std::vector<Subgroup> groups;
    for (const auto& spec : cluster_specs(model)) groups.push_back(materialize(spec, table, schema, registry));
    return groups;
}

MetricValue entropy_bits(std::span<const std::uint64_t> counts) {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) return std::nullopt;
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    // A point mass evaluates to -1*log2(1) = -0.0; report +0.
    return h <= 0.0 ? 0.0 : h;
}

MetricValue feature_entropy(const FeatureDistribution& distribution, std::size_t feature) {
    if (distribution.group_size == 0) return std::nullopt;
    return entropy_bits(distribution.counts.at(feature));
}

std::vector<DominantFeature> dominant_features(const FeatureDistribution& distribution, const FeatureSchema& schema) {
    if (distribution.group_size == 0) throw InvalidArgumentError("dominant features of an empty group");
    std::vector<DominantFeature> out;
    out.reserve(schema.feature_count());
    for (std::size_t f = 0; f < schema.feature_count(); ++f) {
        const auto& counts = distribution.counts.at(f);
        const auto& values = schema.feature(f).values;
        std::size_t best = 0;
        for (std::size_t v = 1; v < counts.size(); ++v) {
            if (counts[v] > counts[best] || (counts[v] == counts[best] && values[v] < values[best])) best = v;
        }
        out.push_back({f, *entropy_bits(counts), static_cast<ValueCode>(best),
                       static_cast<double>(counts[best]) / static_cast<double>(distribution.group_size)});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const DominantFeature& a, const DominantFeature& b) { return a.entropy < b.entropy; });
    return out;
}

std::vector<GroupRef> rank_suggestions(std::span<const GroupRef> groups, std::string_view metric,
                                       std::size_t min_size, const MetricRegistry& registry, SortOrder order) {
    registry.require(metric);
    const bool descending = registry.sorts_descending(metric, order);
    auto kept = filter_by_size(groups, min_size);
    std::vector<std::pair<MetricValue, GroupRef>> keyed;
    keyed.reserve(kept.size());
    for (auto& g : kept) keyed.emplace_back(registry.evaluate(g->counts, metric), std::move(g));
    std::stable_sort(keyed.begin(), keyed.end(),
                     [descending](const auto& a, const auto& b) {
                         return descending ? descending_undefined_last(a.first, b.first)
                                           : ascending_undefined_last(a.first, b.first);
                     });
    std::vector<GroupRef> out;
    out.reserve(keyed.size());
    for (auto& [value, g] : keyed) out.push_back(std::move(g));
    return out;
}

}  // namespace fairaudit
