#include "fairaudit/similar.hpp"

#include <algorithm>
#include <cmath>

#include "fairaudit/errors.hpp"

namespace fairaudit {

namespace {

void check_distribution(std::span<const double> p, const char* name) {
    double sum = 0.0;
    for (double x : p) {
        if (!(x >= 0.0)) throw InvalidArgumentError(std::string(name) + " has a negative or NaN entry");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgumentError(std::string(name) + " does not sum to 1");
}

// p * log2(p / m), zero when p is zero.
double kl_term(double p, double m) {
    return p > 0.0 ? p * std::log2(p / m) : 0.0;
}

}  // namespace

double js_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw InvalidArgumentError("distributions cover different vocabularies");
    check_distribution(p, "p");
    check_distribution(q, "q");
    double kl_p = 0.0;
    double kl_q = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double m = 0.5 * (p[i] + q[i]);
        kl_p += kl_term(p[i], m);
        kl_q += kl_term(q[i], m);
    }
    const double js = 0.5 * kl_p + 0.5 * kl_q;
    return std::clamp(js, 0.0, 1.0);
}

SimilarityResult subgroup_distance(const Subgroup& source, const Subgroup& candidate, const FeatureSchema& schema) {
    if (source.empty() || candidate.empty()) throw InvalidArgumentError("distance to an empty group is undefined");
    SimilarityResult result;
    result.source_id = source.id();
    result.candidate_id = candidate.id();
    result.per_feature.resize(schema.feature_count());
    for (std::size_t f = 0; f < schema.feature_count(); ++f) {
        const double d = js_divergence(source.distribution.normalized(f), candidate.distribution.normalized(f));
        result.per_feature[f] = d;
        result.distance += d;
        const auto& best = schema.feature(result.most_divergent_feature).name;
        if (f > 0 && (d > result.per_feature[result.most_divergent_feature] ||
                      (d == result.per_feature[result.most_divergent_feature] && schema.feature(f).name < best))) {
            result.most_divergent_feature = f;
        }
    }
    if (source.spec.kind == GroupKind::predicate && candidate.spec.kind == GroupKind::predicate) {
        std::vector<ValueChange> delta;
        for (std::size_t f = 0; f < schema.feature_count(); ++f) {
            auto from = source.spec.constrained_value(f);
            auto to = candidate.spec.constrained_value(f);
            if (from != to) delta.push_back({f, from, to});
        }
        result.counterfactual_delta = std::move(delta);
    }
    return result;
}

std::vector<SimilarityResult> find_similar(std::string_view source_id, std::span<const GroupRef> universe,
                                           const SimilarQuery& query, const FeatureSchema& schema,
                                           const MetricRegistry& registry) {
    registry.require(query.sort_metric);
    const bool descending = registry.sorts_descending(query.sort_metric, query.order);
    auto source_it = std::find_if(universe.begin(), universe.end(),
                                  [&](const GroupRef& g) { return g->id() == source_id; });
    if (source_it == universe.end()) throw NotFoundError("unknown group '" + std::string(source_id) + "'");
    const Subgroup& source = **source_it;

    struct Scored {
        SimilarityResult result;
        MetricValue metric;
    };
    std::vector<Scored> scored;
    for (const auto& g : universe) {
        if (g->id() == source.id() || g->empty() || g->size() < query.min_size) continue;
        scored.push_back({subgroup_distance(source, *g, schema), registry.evaluate(g->counts, query.sort_metric)});
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const Scored& a, const Scored& b) { return a.result.distance < b.result.distance; });
    if (scored.size() > query.limit) scored.resize(query.limit);
    std::stable_sort(scored.begin(), scored.end(),
                     [descending](const Scored& a, const Scored& b) {
                         return descending ? descending_undefined_last(a.metric, b.metric)
                                           : ascending_undefined_last(a.metric, b.metric);
                     });

    std::vector<SimilarityResult> out;
    out.reserve(scored.size());
    for (auto& s : scored) out.push_back(std::move(s.result));
    return out;
}

std::vector<CounterfactualNeighbor> counterfactual_neighbors(const Subgroup& source, int radius,
                                                             std::string_view metric, const DataTable& table,
                                                             const FeatureSchema& schema,
                                                             const MetricRegistry& registry) {
    if (source.spec.kind != GroupKind::predicate) {
        throw InvalidArgumentError("counterfactual neighbors need a predicate group");
    }
    if (radius != 1 && radius != 2) throw InvalidArgumentError("radius must be 1 or 2");
    registry.require(metric);

    const auto& constraints = source.spec.constraints;
    const MetricValue base = registry.evaluate(source.counts, metric);
    std::vector<CounterfactualNeighbor> out;

    auto emit = [&](std::vector<Constraint> changed, std::vector<ValueChange> changes) {
        auto spec = make_predicate_spec(schema, std::move(changed));
        auto group = std::make_shared<const Subgroup>(materialize(spec, table, schema, registry));
        CounterfactualNeighbor n;
        n.value = registry.evaluate(group->counts, metric);
        if (base && n.value) n.delta = std::abs(*base - *n.value);
        n.group = std::move(group);
        n.changes = std::move(changes);
        out.push_back(std::move(n));
    };

    // Alternatives for constraint i, in vocabulary order.
    auto alternatives = [&](std::size_t i) {
        std::vector<ValueCode> alt;
        const auto& c = constraints[i];
        for (std::size_t v = 0; v < schema.feature(c.feature).values.size(); ++v) {
            if (v != c.value) alt.push_back(static_cast<ValueCode>(v));
        }
        return alt;
    };

    const std::size_t n = constraints.size();
    if (radius == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            for (ValueCode v : alternatives(i)) {
                auto changed = constraints;
                changed[i].value = v;
                emit(std::move(changed), {{constraints[i].feature, constraints[i].value, v}});
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                for (ValueCode vi : alternatives(i)) {
                    for (ValueCode vj : alternatives(j)) {
                        auto changed = constraints;
                        changed[i].value = vi;
                        changed[j].value = vj;
                        emit(std::move(changed), {{constraints[i].feature, constraints[i].value, vi},
                                                  {constraints[j].feature, constraints[j].value, vj}});
                    }
                }
            }
        }
    }

    std::stable_sort(out.begin(), out.end(), [](const CounterfactualNeighbor& a, const CounterfactualNeighbor& b) {
        if (!a.delta) return false;
        if (!b.delta) return true;
        return *a.delta > *b.delta;
    });
    return out;
}

}  // namespace fairaudit
