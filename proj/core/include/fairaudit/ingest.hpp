#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fairaudit {

using ValueCode = std::uint32_t;
using RowId = std::uint32_t;

/// Settings that turn a delimited file into a categorical audit table.
struct IngestConfig {
    std::string label_column;
    std::string prediction_column;
    std::string positive_label;
    /// When set, the prediction column holds scores and a row is predicted
    /// positive iff its score is strictly greater than this threshold.
    std::optional<double> prediction_threshold;
    std::size_t max_categorical_cardinality = 20;
    std::size_t numeric_bins = 10;
    char delimiter = ',';
    /// Feature columns to keep; empty means every non-label, non-prediction column.
    std::vector<std::string> features;
    std::vector<std::string> ignore_columns;
    std::vector<std::string> missing_values = {"", "?", "NA"};

    void validate() const;
};

struct Feature {
    std::string name;
    std::vector<std::string> values;
    /// True when the values are quantile intervals built from a numeric column.
    bool binned = false;

    std::optional<ValueCode> code_of(std::string_view value) const;
};

/// Ordered features with their value vocabularies.
class FeatureSchema {
public:
    FeatureSchema() = default;
    FeatureSchema(std::vector<Feature> features, std::string label_column, std::string prediction_column,
                  std::string positive_label);

    std::span<const Feature> features() const { return features_; }
    const Feature& feature(std::size_t index) const { return features_.at(index); }
    std::size_t feature_count() const { return features_.size(); }
    std::optional<std::size_t> find_feature(std::string_view name) const;
    /// Index of `name`; throws SchemaError when absent.
    std::size_t require_feature(std::string_view name) const;
    /// Code of `value` in `feature`; throws SchemaError when absent.
    ValueCode require_value(std::size_t feature, std::string_view value) const;

    const std::string& label_column() const { return label_column_; }
    const std::string& prediction_column() const { return prediction_column_; }
    const std::string& positive_label() const { return positive_label_; }

    /// Sum of vocabulary sizes, the one-hot dimension.
    std::size_t dimension() const { return offsets_.empty() ? 0 : offsets_.back(); }
    /// Column where feature `index` starts in the one-hot layout.
    std::size_t block_offset(std::size_t index) const { return offsets_.at(index); }

private:
    std::vector<Feature> features_;
    std::string label_column_;
    std::string prediction_column_;
    std::string positive_label_;
    std::vector<std::size_t> offsets_;
};

/// Immutable columnar store of integer-coded features, labels and predictions.
class DataTable {
public:
    DataTable() = default;
    DataTable(const FeatureSchema& schema, std::vector<std::vector<ValueCode>> columns,
              std::vector<std::uint8_t> labels, std::vector<std::uint8_t> predictions);

    std::size_t row_count() const { return labels_.size(); }
    std::size_t feature_count() const { return columns_.size(); }
    std::span<const ValueCode> column(std::size_t feature) const { return columns_.at(feature); }
    ValueCode code(std::size_t row, std::size_t feature) const { return columns_[feature][row]; }
    bool label(std::size_t row) const { return labels_[row] != 0; }
    bool prediction(std::size_t row) const { return predictions_[row] != 0; }
    std::span<const std::uint8_t> labels() const { return labels_; }
    std::span<const std::uint8_t> predictions() const { return predictions_; }

private:
    std::vector<std::vector<ValueCode>> columns_;
    std::vector<std::uint8_t> labels_;
    std::vector<std::uint8_t> predictions_;
};

struct LoadResult {
    FeatureSchema schema;
    DataTable table;
    /// Data rows read from the source, excluding the header.
    std::size_t input_rows = 0;
    /// Rows discarded because a required column was missing.
    std::size_t dropped_rows = 0;
};

/// Parses a delimited stream with a header row into a schema and table.
/// `source_name` prefixes error messages ("file:line").
LoadResult load_dataset(std::istream& in, const IngestConfig& config, std::string_view source_name = "<input>");
LoadResult load_dataset_file(const std::filesystem::path& path, const IngestConfig& config);

/// One-hot view of a table. Only the active column of each feature block is
/// stored, so a row costs one index per feature.
class OneHotMatrix {
public:
    OneHotMatrix() = default;
    OneHotMatrix(std::size_t row_count, std::size_t dim, std::vector<std::size_t> block_offsets,
                 std::vector<std::uint32_t> active);

    std::size_t row_count() const { return row_count_; }
    std::size_t dim() const { return dim_; }
    std::size_t feature_count() const { return block_offsets_.size(); }
    std::span<const std::size_t> block_offsets() const { return block_offsets_; }
    /// Columns holding a 1 in `row`, one per feature block, ascending.
    std::span<const std::uint32_t> active(std::size_t row) const {
        return {active_.data() + row * feature_count(), feature_count()};
    }
    std::vector<std::uint8_t> dense_row(std::size_t row) const;
    /// Recovers the integer codes of `row` block by block.
    std::vector<ValueCode> decode(std::size_t row) const;

private:
    std::size_t row_count_ = 0;
    std::size_t dim_ = 0;
    std::vector<std::size_t> block_offsets_;
    std::vector<std::uint32_t> active_;
};

OneHotMatrix one_hot(const DataTable& table, const FeatureSchema& schema);

}  // namespace fairaudit
