#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fairaudit/ingest.hpp"

namespace fairaudit {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + tn + fp + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& other) {
        tp += other.tp;
        tn += other.tn;
        fp += other.fp;
        fn += other.fn;
        return *this;
    }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// A metric value, or std::nullopt when its denominator is zero.
using MetricValue = std::optional<double>;
using MetricFormula = std::function<MetricValue(const ConfusionCounts&)>;

/// numerator / denominator, undefined when the denominator is zero.
MetricValue ratio(std::uint64_t numerator, std::uint64_t denominator);

/// Strict weak order for ascending sorts: defined values ascending, undefined last.
bool ascending_undefined_last(const MetricValue& a, const MetricValue& b);
/// Same, descending; undefined values still last.
bool descending_undefined_last(const MetricValue& a, const MetricValue& b);

enum class Direction { higher_is_better, lower_is_better };

/// worst_first sorts ascending for higher-is-better metrics and descending
/// for error rates, so the most problematic groups lead.
enum class SortOrder { worst_first, ascending, descending };

/// Accepts "worst", "asc"/"ascending", "desc"/"descending".
SortOrder parse_sort_order(std::string_view text);

/// Metric values for one group, in registry order.
class MetricSet {
public:
    MetricSet() = default;
    explicit MetricSet(std::vector<std::pair<std::string, MetricValue>> entries) : entries_(std::move(entries)) {}

    /// Throws RegistryError for identifiers not in the set.
    MetricValue at(std::string_view id) const;
    std::span<const std::pair<std::string, MetricValue>> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<std::pair<std::string, MetricValue>> entries_;
};

/// Named formulas over confusion counts. The default registry carries
/// accuracy, recall, specificity, precision, npv, fnr, fpr, fdr, fomr and f1.
class MetricRegistry {
public:
    MetricRegistry() = default;
    static MetricRegistry with_defaults();

    /// Identifiers must be lowercase tokens ([a-z0-9_]+) not yet registered.
    void register_metric(std::string id, MetricFormula formula,
                         Direction direction = Direction::higher_is_better);

    bool contains(std::string_view id) const;
    void require(std::string_view id) const;
    const std::vector<std::string>& ids() const { return ids_; }
    MetricValue evaluate(const ConfusionCounts& counts, std::string_view id) const;
    MetricSet evaluate_all(const ConfusionCounts& counts) const;
    Direction direction(std::string_view id) const;
    /// Whether `order` means a descending sort for metric `id`.
    bool sorts_descending(std::string_view id, SortOrder order) const;
    /// Comma separated list of identifiers, for error messages.
    std::string describe() const;

private:
    std::vector<std::string> ids_;
    std::vector<MetricFormula> formulas_;
    std::vector<Direction> directions_;
};

/// Tallies (label, prediction) pairs over `members`. An empty set yields zeros.
ConfusionCounts confusion(std::span<const RowId> members, const DataTable& table);
ConfusionCounts confusion_all(const DataTable& table);

/// Fraction of positive ground-truth labels; undefined for an empty set.
MetricValue label_balance(std::span<const RowId> members, const DataTable& table);

/// Micro average: the metric over whole-table counts.
MetricValue dataset_average(const DataTable& table, const MetricRegistry& registry, std::string_view metric);

}  // namespace fairaudit
