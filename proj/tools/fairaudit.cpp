// fairaudit: headless subgroup audits.
//
//   fairaudit audit data.csv --config audit.conf --sort fpr --top 5 --out report.json
//   fairaudit similar data.csv --config audit.conf --group "sex=Female,race=Other" --radius 1

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "fairaudit/config.hpp"
#include "fairaudit/csv.hpp"
#include "fairaudit/errors.hpp"
#include "fairaudit/export.hpp"
#include "fairaudit/session.hpp"

namespace {

using fairaudit::AuditConfig;
using fairaudit::MetricValue;

struct CommonOptions {
    std::string input;
    std::string config_path;
    std::vector<std::string> settings;
    std::string label;
    std::string prediction;
    std::string positive;
    std::string metrics;
    std::string out;
    std::optional<double> threshold;
    std::optional<std::size_t> k;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
    cmd.add_option("input", o.input, "Delimited data file with a header row")->required()->check(CLI::ExistingFile);
    cmd.add_option("--config", o.config_path, "key = value configuration file")->check(CLI::ExistingFile);
    cmd.add_option("--set", o.settings, "Override a configuration key (key=value), repeatable");
    cmd.add_option("--label", o.label, "Ground-truth label column");
    cmd.add_option("--prediction", o.prediction, "Model prediction column");
    cmd.add_option("--positive", o.positive, "Positive label value");
    cmd.add_option("--threshold", o.threshold, "Treat predictions as scores; positive iff score > threshold");
    cmd.add_option("--metrics", o.metrics, "Comma separated metrics to report (default: all)");
    cmd.add_option("--k", o.k, "Number of clusters for suggestions");
    cmd.add_option("--seed", o.seed, "Seed for K-means++");
    cmd.add_option("--out", o.out, "Write the JSON document here instead of stdout");
}

AuditConfig build_config(const CommonOptions& o) {
    AuditConfig config;
    if (!o.config_path.empty()) fairaudit::ConfigFile::load(o.config_path).apply(config);
    for (const auto& s : o.settings) {
        auto eq = s.find('=');
        if (eq == std::string::npos) throw fairaudit::ConfigError("--set expects key=value, got '" + s + "'");
        try {
            fairaudit::apply_setting(config, fairaudit::trim(s.substr(0, eq)), s.substr(eq + 1));
        } catch (const fairaudit::ConfigError& e) {
            throw fairaudit::ConfigError(std::string("--set ") + s + ": " + e.what());
        }
    }
    if (!o.label.empty()) config.ingest.label_column = o.label;
    if (!o.prediction.empty()) config.ingest.prediction_column = o.prediction;
    if (!o.positive.empty()) config.ingest.positive_label = o.positive;
    if (o.threshold) config.ingest.prediction_threshold = o.threshold;
    if (o.k) config.cluster.k = *o.k;
    if (o.seed) config.cluster.seed = *o.seed;
    return config;
}

std::vector<std::string> metric_ids(const std::string& text, const fairaudit::MetricRegistry& registry) {
    if (text.empty()) return registry.ids();
    std::vector<std::string> ids;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = fairaudit::trim(item);
        if (item.empty()) continue;
        registry.require(item);
        ids.push_back(item);
    }
    return ids;
}

std::string cell(const MetricValue& v) {
    if (!v) return "n/a";
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << *v;
    return os.str();
}

void write_document(const nlohmann::json& doc, const std::string& out) {
    if (out.empty()) {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream f(out);
    if (!f) throw fairaudit::ConfigError("cannot write '" + out + "'");
    f << doc.dump(2) << "\n";
}

std::unique_ptr<fairaudit::AuditSession> open_session(const CommonOptions& o, const AuditConfig& config,
                                                      std::shared_ptr<const fairaudit::MetricRegistry> registry,
                                                      bool cluster) {
    auto loaded = fairaudit::load_dataset_file(o.input, config.ingest);
    const auto name = std::filesystem::path(o.input).filename().string();
    std::optional<fairaudit::ClusterConfig> clustering;
    if (cluster) clustering = config.cluster;
    return std::make_unique<fairaudit::AuditSession>(name, std::move(loaded), clustering, std::move(registry));
}

int run_audit(const CommonOptions& o, const std::string& sort, const std::string& order_text, std::size_t min_size,
              std::size_t top) {
    auto registry = std::make_shared<const fairaudit::MetricRegistry>(fairaudit::MetricRegistry::with_defaults());
    registry->require(sort);
    const auto order = fairaudit::parse_sort_order(order_text);
    const auto metrics = metric_ids(o.metrics, *registry);
    const auto config = build_config(o);
    auto session = open_session(o, config, registry, true);
    const auto& schema = session->schema();
    const auto groups = session->suggestions(sort, min_size, top, order);
    const bool descending = registry->sorts_descending(sort, order);

    // The table goes to stdout when the document has its own file.
    std::ostream& table = o.out.empty() ? std::cerr : std::cout;
    table << "dataset " << session->id() << ": " << session->table().row_count() << " rows ("
          << session->dropped_rows() << " dropped), k=" << config.cluster.k << " seed=" << config.cluster.seed
          << ", sorted by " << sort << (descending ? " descending" : " ascending") << ", min size " << min_size << "\n";
    table << std::left << std::setw(5) << "rank" << std::setw(12) << "group" << std::setw(8) << "size";
    for (const auto& m : metrics) table << std::setw(13) << m;
    table << "dominant features\n";
    table << std::setw(5) << "-" << std::setw(12) << "dataset" << std::setw(8) << session->table().row_count();
    for (const auto& m : metrics) table << std::setw(13) << cell(session->dataset_average(m));
    table << "\n";
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const auto& g = *groups[i];
        table << std::setw(5) << (i + 1) << std::setw(12) << g.spec.display_name << std::setw(8) << g.size();
        for (const auto& m : metrics) table << std::setw(13) << cell(g.metrics.at(m));
        const auto dominant = fairaudit::dominant_features(g.distribution, schema);
        for (std::size_t d = 0; d < dominant.size() && d < 3; ++d) {
            const auto& f = schema.feature(dominant[d].feature);
            table << (d ? ", " : "") << f.name << "=" << f.values[dominant[d].value] << " ("
                  << std::fixed << std::setprecision(2) << dominant[d].fraction << ")";
        }
        table << "\n";
    }
    table.flush();

    write_document(fairaudit::export_document(session->id(), groups, schema), o.out);
    return 0;
}

int run_similar(const CommonOptions& o, const std::string& group, int radius, const std::string& metric) {
    auto registry = std::make_shared<const fairaudit::MetricRegistry>(fairaudit::MetricRegistry::with_defaults());
    registry->require(metric);
    const auto metrics = metric_ids(o.metrics, *registry);
    const auto config = build_config(o);
    auto session = open_session(o, config, registry, false);
    const auto& schema = session->schema();

    auto source = session->add_predicate(fairaudit::parse_constraints(schema, group));
    const auto neighbors = session->counterfactual(source->id(), radius, metric);

    std::ostream& table = o.out.empty() ? std::cerr : std::cout;
    table << "source " << source->spec.display_name << ": size " << source->size() << ", " << metric << " "
          << cell(source->metrics.at(metric)) << "; radius " << radius << "\n";
    table << std::left << std::setw(5) << "rank" << std::setw(8) << "size" << std::setw(10) << metric
          << std::setw(10) << "delta" << "changes\n";
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        const auto& n = neighbors[i];
        table << std::setw(5) << (i + 1) << std::setw(8) << n.group->size() << std::setw(10) << cell(n.value)
              << std::setw(10) << cell(n.delta);
        for (std::size_t c = 0; c < n.changes.size(); ++c) {
            const auto& f = schema.feature(n.changes[c].feature);
            table << (c ? ", " : "") << f.name << ": " << f.values[*n.changes[c].from] << " -> "
                  << f.values[*n.changes[c].to];
        }
        if (n.group->empty()) table << " (empty)";
        table << "\n";
    }
    table.flush();

    nlohmann::json doc;
    doc["tool_version"] = std::string(fairaudit::tool_version);
    doc["dataset_id"] = session->id();
    doc["source"] = fairaudit::export_group(*source, schema);
    doc["radius"] = radius;
    doc["metric"] = metric;
    doc["neighbors"] = nlohmann::json::array();
    for (const auto& n : neighbors) doc["neighbors"].push_back(fairaudit::counterfactual_json(n, schema, metrics));
    write_document(doc, o.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Intersectional subgroup audits for binary classifiers"};
    app.require_subcommand(1);

    CommonOptions audit_opts;
    std::string sort = "accuracy";
    std::string order = "worst";
    std::size_t min_size = fairaudit::default_min_size;
    std::size_t top = 10;
    auto* audit = app.add_subcommand("audit", "Cluster the data and report the worst suggested subgroups");
    add_common(*audit, audit_opts);
    audit->add_option("--sort", sort, "Metric to sort suggestions by");
    audit->add_option("--order", order, "worst (default: error rates descending, others ascending), asc or desc");
    audit->add_option("--min-size", min_size, "Hide groups smaller than this");
    audit->add_option("--top", top, "Number of suggested groups to report");

    CommonOptions similar_opts;
    std::string group;
    int radius = 1;
    std::string metric = "accuracy";
    auto* similar = app.add_subcommand("similar", "Rank counterfactual neighbours of a predicate group");
    add_common(*similar, similar_opts);
    similar->add_option("--group", group, "Constraints, e.g. \"sex=Female,race=Other\"")->required();
    similar->add_option("--radius", radius, "Number of constraint values to switch")->check(CLI::IsMember({1, 2}));
    similar->add_option("--metric", metric, "Metric whose change ranks the neighbours");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*audit) return run_audit(audit_opts, sort, order, min_size, top);
        if (*similar) return run_similar(similar_opts, group, radius, metric);
    } catch (const fairaudit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
