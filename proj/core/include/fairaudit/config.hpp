#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>

#include "fairaudit/ingest.hpp"
#include "fairaudit/kmeans.hpp"

namespace fairaudit {

/// Ingest and clustering settings for one audit.
struct AuditConfig {
    IngestConfig ingest;
    ClusterConfig cluster;
};

/// Flat `key = value` file. '#' starts a comment line; blank lines are ignored.
///
/// Keys: label_column, prediction_column, positive_label,
/// prediction_threshold, max_categorical_cardinality, numeric_bins,
/// delimiter ("tab" or a single character), features, ignore_columns,
/// missing_values (comma separated lists), k, seed, max_iterations, tolerance.
class ConfigFile {
public:
    static ConfigFile parse(std::istream& in, std::string_view source_name = "<config>");
    static ConfigFile load(const std::filesystem::path& path);

    /// Applies every entry. Unknown keys and bad values raise ConfigError
    /// with file:line context.
    void apply(AuditConfig& config) const;

private:
    struct Entry {
        std::string value;
        std::size_t line = 0;
    };
    std::string source_;
    std::map<std::string, Entry> entries_;
};

/// Applies a single key. Used for command-line overrides as well.
void apply_setting(AuditConfig& config, std::string_view key, std::string_view value);

}  // namespace fairaudit
