#include "fairaudit/export.hpp"

namespace fairaudit {

using nlohmann::json;

json to_json(const MetricValue& value) {
    return value ? json(*value) : json(nullptr);
}

json to_json(const ConfusionCounts& counts) {
    return json{{"tp", counts.tp}, {"tn", counts.tn}, {"fp", counts.fp}, {"fn", counts.fn}};
}

json to_json(const MetricSet& metrics) {
    json out = json::object();
    for (const auto& [id, value] : metrics.entries()) out[id] = to_json(value);
    return out;
}

json metrics_json(const MetricSet& metrics, std::span<const std::string> ids) {
    json out = json::object();
    for (const auto& id : ids) out[id] = to_json(metrics.at(id));
    return out;
}

json constraints_json(const SubgroupSpec& spec, const FeatureSchema& schema) {
    json out = json::object();
    for (const auto& c : spec.constraints) {
        const auto& f = schema.feature(c.feature);
        out[f.name] = f.values[c.value];
    }
    return out;
}

json dominant_json(const FeatureDistribution& distribution, const FeatureSchema& schema, std::size_t limit) {
    json out = json::array();
    if (distribution.group_size == 0) return out;
    for (const auto& d : dominant_features(distribution, schema)) {
        if (out.size() >= limit) break;
        const auto& f = schema.feature(d.feature);
        out.push_back({{"feature", f.name}, {"value", f.values[d.value]}, {"fraction", d.fraction},
                       {"entropy", d.entropy}});
    }
    return out;
}

json distribution_json(const FeatureDistribution& distribution, const FeatureSchema& schema) {
    json out = json::array();
    for (std::size_t f = 0; f < schema.feature_count(); ++f) {
        out.push_back({{"feature", schema.feature(f).name},
                       {"values", schema.feature(f).values},
                       {"counts", distribution.counts.at(f)}});
    }
    return out;
}

json export_group(const Subgroup& group, const FeatureSchema& schema) {
    json out;
    out["id"] = group.id();
    out["kind"] = std::string(to_string(group.spec.kind));
    if (group.spec.kind == GroupKind::predicate) {
        out["constraints"] = constraints_json(group.spec, schema);
    } else {
        out["dominant_features"] = dominant_json(group.distribution, schema);
    }
    out["size"] = group.size();
    out["confusion"] = to_json(group.counts);
    out["metrics"] = to_json(group.metrics);
    out["label_balance"] = to_json(group.label_balance);
    return out;
}

json export_document(std::string_view dataset_id, std::span<const GroupRef> groups, const FeatureSchema& schema) {
    json doc;
    doc["tool_version"] = std::string(tool_version);
    doc["dataset_id"] = std::string(dataset_id);
    doc["groups"] = json::array();
    for (const auto& g : groups) doc["groups"].push_back(export_group(*g, schema));
    return doc;
}

json group_summary(const Subgroup& group, const FeatureSchema& schema, std::span<const std::string> metrics) {
    json out;
    out["id"] = group.id();
    out["name"] = group.spec.display_name;
    out["kind"] = std::string(to_string(group.spec.kind));
    out["size"] = group.size();
    out["empty"] = group.empty();
    if (group.spec.kind == GroupKind::predicate) {
        out["constraints"] = constraints_json(group.spec, schema);
    } else {
        out["dominant_features"] = dominant_json(group.distribution, schema);
    }
    out["metrics"] = metrics_json(group.metrics, metrics);
    return out;
}

json dataset_averages(const AuditSession& session, std::span<const std::string> metrics) {
    json out = json::object();
    for (const auto& id : metrics) out[id] = to_json(session.dataset_average(id));
    return out;
}

json value_changes_json(std::span<const ValueChange> changes, const FeatureSchema& schema) {
    json out = json::array();
    for (const auto& c : changes) {
        const auto& f = schema.feature(c.feature);
        out.push_back({{"feature", f.name},
                       {"from", c.from ? json(f.values[*c.from]) : json(nullptr)},
                       {"to", c.to ? json(f.values[*c.to]) : json(nullptr)}});
    }
    return out;
}

json similarity_json(const SimilarityResult& result, const AuditSession& session, std::span<const std::string> metrics) {
    const auto& schema = session.schema();
    auto candidate = session.find(result.candidate_id);
    json out;
    out["id"] = result.candidate_id;
    out["name"] = candidate->spec.display_name;
    out["kind"] = std::string(to_string(candidate->spec.kind));
    out["size"] = candidate->size();
    out["distance"] = result.distance;
    out["most_divergent_feature"] = schema.feature(result.most_divergent_feature).name;
    json per_feature = json::object();
    for (std::size_t f = 0; f < result.per_feature.size(); ++f) per_feature[schema.feature(f).name] = result.per_feature[f];
    out["per_feature"] = std::move(per_feature);
    out["metrics"] = metrics_json(candidate->metrics, metrics);
    if (result.counterfactual_delta) out["counterfactual_delta"] = value_changes_json(*result.counterfactual_delta, schema);
    return out;
}

json counterfactual_json(const CounterfactualNeighbor& neighbor, const FeatureSchema& schema,
                         std::span<const std::string> metrics) {
    json out;
    out["id"] = neighbor.group->id();
    out["name"] = neighbor.group->spec.display_name;
    out["size"] = neighbor.group->size();
    out["empty"] = neighbor.group->empty();
    out["changes"] = value_changes_json(neighbor.changes, schema);
    out["value"] = to_json(neighbor.value);
    out["delta"] = to_json(neighbor.delta);
    out["metrics"] = metrics_json(neighbor.group->metrics, metrics);
    return out;
}

json detail_json(const Subgroup& group, const FeatureSchema& schema) {
    json out = export_group(group, schema);
    out["name"] = group.spec.display_name;
    out["distributions"] = distribution_json(group.distribution, schema);
    return out;
}

}  // namespace fairaudit
