#include "fairaudit/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <vector>

#include "fairaudit/csv.hpp"
#include "fairaudit/errors.hpp"

namespace fairaudit {

namespace {

template <typename T>
T parse_unsigned(std::string_view key, std::string_view text) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError("'" + std::string(key) + "' expects a nonnegative integer, got '" + std::string(text) + "'");
    }
    return value;
}

double parse_real(std::string_view key, std::string_view text) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw ConfigError("'" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string> parse_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        out.push_back(trim(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

}  // namespace

void apply_setting(AuditConfig& config, std::string_view key, std::string_view raw) {
    const std::string value = trim(raw);
    auto& in = config.ingest;
    auto& cl = config.cluster;
    if (key == "label_column") {
        in.label_column = value;
    } else if (key == "prediction_column") {
        in.prediction_column = value;
    } else if (key == "positive_label") {
        in.positive_label = value;
    } else if (key == "prediction_threshold") {
        if (value.empty()) in.prediction_threshold.reset();
        else in.prediction_threshold = parse_real(key, value);
    } else if (key == "max_categorical_cardinality") {
        in.max_categorical_cardinality = parse_unsigned<std::size_t>(key, value);
    } else if (key == "numeric_bins") {
        in.numeric_bins = parse_unsigned<std::size_t>(key, value);
    } else if (key == "delimiter") {
        if (value == "tab" || value == "\\t") in.delimiter = '\t';
        else if (value.size() == 1) in.delimiter = value[0];
        else throw ConfigError("'delimiter' expects one character or 'tab', got '" + value + "'");
    } else if (key == "features") {
        in.features = value.empty() ? std::vector<std::string>{} : parse_list(value);
    } else if (key == "ignore_columns") {
        in.ignore_columns = value.empty() ? std::vector<std::string>{} : parse_list(value);
    } else if (key == "missing_values") {
        // Raw text keeps "" reachable: "missing_values = ,?" means {"", "?"}.
        in.missing_values = parse_list(raw);
    } else if (key == "k") {
        cl.k = parse_unsigned<std::size_t>(key, value);
    } else if (key == "seed") {
        cl.seed = parse_unsigned<std::uint64_t>(key, value);
    } else if (key == "max_iterations") {
        cl.max_iterations = parse_unsigned<std::size_t>(key, value);
    } else if (key == "tolerance") {
        cl.tolerance = parse_real(key, value);
        if (cl.tolerance < 0.0) throw ConfigError("'tolerance' must be >= 0");
    } else {
        throw ConfigError("unknown configuration key '" + std::string(key) + "'");
    }
}

ConfigFile ConfigFile::parse(std::istream& in, std::string_view source_name) {
    ConfigFile file;
    file.source_ = std::string(source_name);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(file.source_ + ":" + std::to_string(number) + ": expected key = value");
        }
        std::string key = trim(std::string_view(line).substr(0, eq));
        if (key.empty()) throw ConfigError(file.source_ + ":" + std::to_string(number) + ": empty key");
        if (file.entries_.count(key)) {
            throw ConfigError(file.source_ + ":" + std::to_string(number) + ": duplicate key '" + key + "'");
        }
        std::string value = line.substr(eq + 1);
        if (!value.empty() && value.back() == '\r') value.pop_back();
        file.entries_.emplace(std::move(key), Entry{std::move(value), number});
    }
    return file;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    return parse(in, path.string());
}

void ConfigFile::apply(AuditConfig& config) const {
    for (const auto& [key, entry] : entries_) {
        try {
            apply_setting(config, key, entry.value);
        } catch (const ConfigError& e) {
            throw ConfigError(source_ + ":" + std::to_string(entry.line) + ": " + e.what());
        }
    }
}

}  // namespace fairaudit
