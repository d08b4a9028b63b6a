#include "fairaudit/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "fairaudit/binning.hpp"
#include "fairaudit/csv.hpp"
#include "fairaudit/errors.hpp"

namespace fairaudit {

namespace {

std::optional<double> parse_number(std::string_view text) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::string where(std::string_view source, std::size_t line) {
    return std::string(source) + ":" + std::to_string(line);
}

// Raw text of one feature column across the kept rows.
struct RawColumn {
    std::size_t header_index = 0;
    std::string name;
    std::vector<std::string> values;
};

Feature categorical_feature(const RawColumn& raw, std::vector<ValueCode>& codes) {
    std::set<std::string> distinct(raw.values.begin(), raw.values.end());
    Feature feature{raw.name, std::vector<std::string>(distinct.begin(), distinct.end()), false};
    std::unordered_map<std::string_view, ValueCode> lookup;
    for (std::size_t i = 0; i < feature.values.size(); ++i) {
        lookup.emplace(feature.values[i], static_cast<ValueCode>(i));
    }
    codes.reserve(raw.values.size());
    for (const auto& v : raw.values) codes.push_back(lookup.at(v));
    return feature;
}

Feature binned_feature(const RawColumn& raw, std::span<const double> numbers, std::size_t bins,
                       std::vector<ValueCode>& codes) {
    QuantileBinning binning(numbers, bins);
    codes.reserve(numbers.size());
    for (double x : numbers) codes.push_back(static_cast<ValueCode>(binning.bin_of(x)));
    return Feature{raw.name, binning.labels(), true};
}

}  // namespace

void IngestConfig::validate() const {
    if (label_column.empty()) throw ConfigError("label_column is required");
    if (prediction_column.empty()) throw ConfigError("prediction_column is required");
    if (positive_label.empty()) throw ConfigError("positive_label is required");
    if (label_column == prediction_column) throw ConfigError("label_column and prediction_column must differ");
    if (numeric_bins == 0) throw ConfigError("numeric_bins must be positive");
    if (delimiter == '"' || delimiter == '\n' || delimiter == '\r') throw ConfigError("invalid delimiter");
}

std::optional<ValueCode> Feature::code_of(std::string_view value) const {
    auto it = std::find(values.begin(), values.end(), value);
    if (it == values.end()) return std::nullopt;
    return static_cast<ValueCode>(it - values.begin());
}

FeatureSchema::FeatureSchema(std::vector<Feature> features, std::string label_column, std::string prediction_column,
                             std::string positive_label)
    : features_(std::move(features)),
      label_column_(std::move(label_column)),
      prediction_column_(std::move(prediction_column)),
      positive_label_(std::move(positive_label)) {
    std::unordered_set<std::string_view> names;
    offsets_.reserve(features_.size() + 1);
    offsets_.push_back(0);
    for (const auto& f : features_) {
        if (!names.insert(f.name).second) throw SchemaError("duplicate feature name '" + f.name + "'");
        if (f.name == label_column_ || f.name == prediction_column_) {
            throw SchemaError("feature '" + f.name + "' collides with the label or prediction column");
        }
        if (f.values.empty()) throw SchemaError("feature '" + f.name + "' has no values");
        std::unordered_set<std::string_view> seen;
        for (const auto& v : f.values) {
            if (!seen.insert(v).second) throw SchemaError("feature '" + f.name + "' repeats value '" + v + "'");
        }
        offsets_.push_back(offsets_.back() + f.values.size());
    }
}

std::optional<std::size_t> FeatureSchema::find_feature(std::string_view name) const {
    for (std::size_t i = 0; i < features_.size(); ++i) {
        if (features_[i].name == name) return i;
    }
    return std::nullopt;
}

std::size_t FeatureSchema::require_feature(std::string_view name) const {
    if (auto index = find_feature(name)) return *index;
    throw SchemaError("unknown feature '" + std::string(name) + "'");
}

ValueCode FeatureSchema::require_value(std::size_t feature, std::string_view value) const {
    const auto& f = features_.at(feature);
    if (auto code = f.code_of(value)) return *code;
    throw SchemaError("feature '" + f.name + "' has no value '" + std::string(value) + "'");
}

DataTable::DataTable(const FeatureSchema& schema, std::vector<std::vector<ValueCode>> columns,
                     std::vector<std::uint8_t> labels, std::vector<std::uint8_t> predictions)
    : columns_(std::move(columns)), labels_(std::move(labels)), predictions_(std::move(predictions)) {
    if (columns_.size() != schema.feature_count()) throw SchemaError("column count does not match schema");
    if (predictions_.size() != labels_.size()) throw SchemaError("label and prediction lengths differ");
    for (std::size_t f = 0; f < columns_.size(); ++f) {
        if (columns_[f].size() != labels_.size()) throw SchemaError("column length mismatch");
        const auto limit = schema.feature(f).values.size();
        for (ValueCode c : columns_[f]) {
            if (c >= limit) throw SchemaError("code out of range in feature '" + schema.feature(f).name + "'");
        }
    }
    for (auto& b : labels_) b = b ? 1 : 0;
    for (auto& b : predictions_) b = b ? 1 : 0;
}

LoadResult load_dataset(std::istream& in, const IngestConfig& config, std::string_view source_name) {
    config.validate();
    CsvReader reader(in, config.delimiter);

    CsvRecord header;
    if (!reader.next(header)) throw SchemaError(std::string(source_name) + ": missing header row");
    std::vector<std::string> names;
    names.reserve(header.fields.size());
    for (const auto& h : header.fields) names.push_back(trim(h));

    auto locate = [&](const std::string& column) -> std::size_t {
        std::size_t found = names.size();
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] != column) continue;
            if (found != names.size()) {
                throw SchemaError(where(source_name, header.line) + ": column '" + column + "' appears twice");
            }
            found = i;
        }
        if (found == names.size()) {
            throw SchemaError(where(source_name, header.line) + ": column '" + column + "' not found in header");
        }
        return found;
    };

    const std::size_t label_index = locate(config.label_column);
    const std::size_t prediction_index = locate(config.prediction_column);

    std::vector<RawColumn> raw;
    if (!config.features.empty()) {
        for (const auto& name : config.features) {
            if (name == config.label_column || name == config.prediction_column) {
                throw SchemaError("feature '" + name + "' is the label or prediction column");
            }
            raw.push_back({locate(name), name, {}});
        }
    } else {
        std::set<std::string> ignored(config.ignore_columns.begin(), config.ignore_columns.end());
        for (const auto& name : config.ignore_columns) (void)locate(name);
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i == label_index || i == prediction_index || ignored.count(names[i])) continue;
            raw.push_back({locate(names[i]), names[i], {}});
        }
    }
    if (raw.empty()) throw SchemaError(std::string(source_name) + ": no feature columns");

    const std::unordered_set<std::string> missing(config.missing_values.begin(), config.missing_values.end());

    std::vector<std::string> label_text;
    std::vector<std::string> prediction_text;
    std::vector<std::uint8_t> threshold_predictions;
    std::vector<std::size_t> row_lines;
    std::size_t input_rows = 0;
    std::size_t dropped = 0;

    CsvRecord record;
    std::vector<std::string> cells(raw.size());
    while (reader.next(record)) {
        ++input_rows;
        if (record.fields.size() != names.size()) {
            throw SchemaError(where(source_name, record.line) + ": expected " + std::to_string(names.size()) +
                              " fields, found " + std::to_string(record.fields.size()));
        }
        std::string label = trim(record.fields[label_index]);
        std::string prediction = trim(record.fields[prediction_index]);
        bool usable = !missing.count(label) && !missing.count(prediction);
        for (std::size_t f = 0; usable && f < raw.size(); ++f) {
            cells[f] = trim(record.fields[raw[f].header_index]);
            if (missing.count(cells[f])) usable = false;
        }
        if (!usable) {
            ++dropped;
            continue;
        }
        if (config.prediction_threshold) {
            auto score = parse_number(prediction);
            if (!score) {
                throw LabelError(where(source_name, record.line) + ": prediction '" + prediction + "' in column '" +
                                 config.prediction_column + "' is not numeric");
            }
            threshold_predictions.push_back(*score > *config.prediction_threshold ? 1 : 0);
        } else {
            prediction_text.push_back(std::move(prediction));
        }
        label_text.push_back(std::move(label));
        row_lines.push_back(record.line);
        for (std::size_t f = 0; f < raw.size(); ++f) raw[f].values.push_back(std::move(cells[f]));
    }

    const std::size_t rows = label_text.size();
    if (rows == 0) {
        throw EmptyDatasetError(std::string(source_name) + ": no usable rows (" + std::to_string(dropped) +
                                " dropped for missing values)");
    }

    std::set<std::string> label_values(label_text.begin(), label_text.end());
    if (label_values.size() < 2) {
        throw LabelError(std::string(source_name) + ": label column '" + config.label_column +
                         "' has fewer than 2 distinct values");
    }
    if (label_values.size() > 2) {
        throw LabelError(std::string(source_name) + ": label column '" + config.label_column + "' has " +
                         std::to_string(label_values.size()) + " distinct values, expected 2");
    }
    if (!label_values.count(config.positive_label)) {
        throw LabelError(std::string(source_name) + ": positive label '" + config.positive_label +
                         "' does not occur in column '" + config.label_column + "'");
    }

    std::vector<std::uint8_t> labels(rows);
    for (std::size_t r = 0; r < rows; ++r) labels[r] = label_text[r] == config.positive_label ? 1 : 0;

    std::vector<std::uint8_t> predictions;
    if (config.prediction_threshold) {
        predictions = std::move(threshold_predictions);
    } else {
        predictions.resize(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            if (!label_values.count(prediction_text[r])) {
                throw LabelError(where(source_name, row_lines[r]) + ": prediction '" + prediction_text[r] +
                                 "' is not one of the label values");
            }
            predictions[r] = prediction_text[r] == config.positive_label ? 1 : 0;
        }
    }

    std::vector<Feature> features;
    std::vector<std::vector<ValueCode>> columns(raw.size());
    for (std::size_t f = 0; f < raw.size(); ++f) {
        std::unordered_set<std::string_view> distinct(raw[f].values.begin(), raw[f].values.end());
        std::vector<double> numbers;
        if (distinct.size() > config.max_categorical_cardinality) {
            numbers.reserve(rows);
            for (const auto& v : raw[f].values) {
                auto x = parse_number(v);
                if (!x) {
                    numbers.clear();
                    break;
                }
                numbers.push_back(*x);
            }
        }
        if (!numbers.empty()) {
            features.push_back(binned_feature(raw[f], numbers, config.numeric_bins, columns[f]));
        } else {
            features.push_back(categorical_feature(raw[f], columns[f]));
        }
        raw[f].values = {};
    }

    FeatureSchema schema(std::move(features), config.label_column, config.prediction_column, config.positive_label);
    DataTable table(schema, std::move(columns), std::move(labels), std::move(predictions));
    return LoadResult{std::move(schema), std::move(table), input_rows, dropped};
}

LoadResult load_dataset_file(const std::filesystem::path& path, const IngestConfig& config) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open '" + path.string() + "'");
    return load_dataset(in, config, path.string());
}

OneHotMatrix::OneHotMatrix(std::size_t row_count, std::size_t dim, std::vector<std::size_t> block_offsets,
                           std::vector<std::uint32_t> active)
    : row_count_(row_count), dim_(dim), block_offsets_(std::move(block_offsets)), active_(std::move(active)) {
    if (active_.size() != row_count_ * block_offsets_.size()) throw SchemaError("one-hot layout mismatch");
}

std::vector<std::uint8_t> OneHotMatrix::dense_row(std::size_t row) const {
    std::vector<std::uint8_t> out(dim_, 0);
    for (auto c : active(row)) out[c] = 1;
    return out;
}

std::vector<ValueCode> OneHotMatrix::decode(std::size_t row) const {
    auto cols = active(row);
    std::vector<ValueCode> codes(cols.size());
    for (std::size_t f = 0; f < cols.size(); ++f) {
        codes[f] = static_cast<ValueCode>(cols[f] - block_offsets_[f]);
    }
    return codes;
}

OneHotMatrix one_hot(const DataTable& table, const FeatureSchema& schema) {
    const std::size_t rows = table.row_count();
    const std::size_t nf = schema.feature_count();
    std::vector<std::size_t> offsets(nf);
    for (std::size_t f = 0; f < nf; ++f) offsets[f] = schema.block_offset(f);
    std::vector<std::uint32_t> active(rows * nf);
    for (std::size_t f = 0; f < nf; ++f) {
        auto col = table.column(f);
        for (std::size_t r = 0; r < rows; ++r) {
            active[r * nf + f] = static_cast<std::uint32_t>(offsets[f] + col[r]);
        }
    }
    return OneHotMatrix(rows, schema.dimension(), std::move(offsets), std::move(active));
}

}  // namespace fairaudit
