#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fairaudit/ingest.hpp"

namespace fixtures {

inline fairaudit::IngestConfig basic_config() {
    fairaudit::IngestConfig c;
    c.label_column = "label";
    c.prediction_column = "pred";
    c.positive_label = "1";
    return c;
}

inline fairaudit::LoadResult load_text(const std::string& text, fairaudit::IngestConfig config = basic_config()) {
    std::istringstream in(text);
    return fairaudit::load_dataset(in, config, "test.csv");
}

// A table with `cardinalities.size()` features named f0, f1, ... whose
// values are v0, v1, ...; codes, labels and predictions drawn uniformly.
inline fairaudit::LoadResult random_table(std::mt19937_64& rng, std::size_t rows,
                                          const std::vector<std::size_t>& cardinalities) {
    std::vector<fairaudit::Feature> features;
    std::vector<std::vector<fairaudit::ValueCode>> columns;
    for (std::size_t f = 0; f < cardinalities.size(); ++f) {
        fairaudit::Feature feature;
        feature.name = "f" + std::to_string(f);
        for (std::size_t v = 0; v < cardinalities[f]; ++v) feature.values.push_back("v" + std::to_string(v));
        features.push_back(feature);
        std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(cardinalities[f] - 1));
        std::vector<fairaudit::ValueCode> column(rows);
        for (auto& code : column) code = pick(rng);
        columns.push_back(std::move(column));
    }
    std::bernoulli_distribution coin(0.5);
    std::vector<std::uint8_t> labels(rows);
    std::vector<std::uint8_t> predictions(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        labels[r] = coin(rng);
        predictions[r] = coin(rng);
    }
    fairaudit::LoadResult out;
    out.schema = fairaudit::FeatureSchema(std::move(features), "label", "pred", "1");
    out.table = fairaudit::DataTable(out.schema, std::move(columns), std::move(labels), std::move(predictions));
    out.input_rows = rows;
    return out;
}

}  // namespace fixtures
