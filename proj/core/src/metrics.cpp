#include "fairaudit/metrics.hpp"

#include <algorithm>

#include "fairaudit/errors.hpp"

namespace fairaudit {

MetricValue ratio(std::uint64_t numerator, std::uint64_t denominator) {
    if (denominator == 0) return std::nullopt;
    return static_cast<double>(numerator) / static_cast<double>(denominator);
}

bool ascending_undefined_last(const MetricValue& a, const MetricValue& b) {
    if (!a) return false;
    if (!b) return true;
    return *a < *b;
}

bool descending_undefined_last(const MetricValue& a, const MetricValue& b) {
    if (!a) return false;
    if (!b) return true;
    return *a > *b;
}

SortOrder parse_sort_order(std::string_view text) {
    if (text == "worst" || text == "worst_first") return SortOrder::worst_first;
    if (text == "asc" || text == "ascending") return SortOrder::ascending;
    if (text == "desc" || text == "descending") return SortOrder::descending;
    throw InvalidArgumentError("unknown sort order '" + std::string(text) + "'; use worst, asc or desc");
}

MetricValue MetricSet::at(std::string_view id) const {
    for (const auto& [name, value] : entries_) {
        if (name == id) return value;
    }
    throw RegistryError("metric '" + std::string(id) + "' is not in this metric set");
}

MetricRegistry MetricRegistry::with_defaults() {
    MetricRegistry r;
    r.register_metric("accuracy", [](const ConfusionCounts& c) { return ratio(c.tp + c.tn, c.total()); });
    r.register_metric("recall", [](const ConfusionCounts& c) { return ratio(c.tp, c.tp + c.fn); });
    r.register_metric("specificity", [](const ConfusionCounts& c) { return ratio(c.tn, c.tn + c.fp); });
    r.register_metric("precision", [](const ConfusionCounts& c) { return ratio(c.tp, c.tp + c.fp); });
    r.register_metric("npv", [](const ConfusionCounts& c) { return ratio(c.tn, c.tn + c.fn); });
    r.register_metric("fnr", [](const ConfusionCounts& c) { return ratio(c.fn, c.fn + c.tp); },
                      Direction::lower_is_better);
    r.register_metric("fpr", [](const ConfusionCounts& c) { return ratio(c.fp, c.fp + c.tn); },
                      Direction::lower_is_better);
    r.register_metric("fdr", [](const ConfusionCounts& c) { return ratio(c.fp, c.fp + c.tp); },
                      Direction::lower_is_better);
    r.register_metric("fomr", [](const ConfusionCounts& c) { return ratio(c.fn, c.fn + c.tn); },
                      Direction::lower_is_better);
    r.register_metric("f1", [](const ConfusionCounts& c) -> MetricValue {
        // Undefined whenever precision or recall is.
        auto p = ratio(c.tp, c.tp + c.fp);
        auto q = ratio(c.tp, c.tp + c.fn);
        if (!p || !q) return std::nullopt;
        if (*p + *q == 0.0) return std::nullopt;
        return 2.0 * *p * *q / (*p + *q);
    });
    return r;
}

void MetricRegistry::register_metric(std::string id, MetricFormula formula, Direction direction) {
    if (id.empty() || !std::all_of(id.begin(), id.end(), [](char c) {
            return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
        })) {
        throw RegistryError("metric identifier '" + id + "' must be a lowercase token");
    }
    if (contains(id)) throw RegistryError("metric '" + id + "' is already registered");
    if (!formula) throw RegistryError("metric '" + id + "' has no formula");
    ids_.push_back(std::move(id));
    formulas_.push_back(std::move(formula));
    directions_.push_back(direction);
}

Direction MetricRegistry::direction(std::string_view id) const {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) require(id);
    return directions_[static_cast<std::size_t>(it - ids_.begin())];
}

bool MetricRegistry::sorts_descending(std::string_view id, SortOrder order) const {
    switch (order) {
        case SortOrder::ascending: return false;
        case SortOrder::descending: return true;
        case SortOrder::worst_first: break;
    }
    return direction(id) == Direction::lower_is_better;
}

bool MetricRegistry::contains(std::string_view id) const {
    return std::find(ids_.begin(), ids_.end(), id) != ids_.end();
}

void MetricRegistry::require(std::string_view id) const {
    if (!contains(id)) {
        throw RegistryError("unknown metric '" + std::string(id) + "'; valid metrics: " + describe());
    }
}

MetricValue MetricRegistry::evaluate(const ConfusionCounts& counts, std::string_view id) const {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) require(id);
    return formulas_[static_cast<std::size_t>(it - ids_.begin())](counts);
}

MetricSet MetricRegistry::evaluate_all(const ConfusionCounts& counts) const {
    std::vector<std::pair<std::string, MetricValue>> entries;
    entries.reserve(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) entries.emplace_back(ids_[i], formulas_[i](counts));
    return MetricSet(std::move(entries));
}

std::string MetricRegistry::describe() const {
    std::string out;
    for (const auto& id : ids_) {
        if (!out.empty()) out += ", ";
        out += id;
    }
    return out;
}

ConfusionCounts confusion(std::span<const RowId> members, const DataTable& table) {
    ConfusionCounts c;
    const auto labels = table.labels();
    const auto predictions = table.predictions();
    for (RowId r : members) {
        const bool y = labels[r] != 0;
        const bool p = predictions[r] != 0;
        if (y && p) ++c.tp;
        else if (!y && !p) ++c.tn;
        else if (!y && p) ++c.fp;
        else ++c.fn;
    }
    return c;
}

ConfusionCounts confusion_all(const DataTable& table) {
    ConfusionCounts c;
    const auto labels = table.labels();
    const auto predictions = table.predictions();
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        const bool y = labels[r] != 0;
        const bool p = predictions[r] != 0;
        if (y && p) ++c.tp;
        else if (!y && !p) ++c.tn;
        else if (!y && p) ++c.fp;
        else ++c.fn;
    }
    return c;
}

MetricValue label_balance(std::span<const RowId> members, const DataTable& table) {
    std::uint64_t positive = 0;
    for (RowId r : members) positive += table.label(r) ? 1 : 0;
    return ratio(positive, members.size());
}

MetricValue dataset_average(const DataTable& table, const MetricRegistry& registry, std::string_view metric) {
    return registry.evaluate(confusion_all(table), metric);
}

}  // namespace fairaudit
