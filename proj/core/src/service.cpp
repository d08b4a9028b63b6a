#include "fairaudit/service.hpp"

#include <charconv>
#include <sstream>
#include <vector>

#include "fairaudit/csv.hpp"
#include "fairaudit/errors.hpp"
#include "fairaudit/export.hpp"

namespace fairaudit {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos < path.size()) {
        std::size_t slash = path.find('/', pos);
        if (slash == std::string_view::npos) slash = path.size();
        if (slash > pos) parts.emplace_back(path.substr(pos, slash - pos));
        pos = slash + 1;
    }
    return parts;
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        auto item = trim(text.substr(pos, comma - pos));
        if (!item.empty()) out.push_back(std::move(item));
        pos = comma + 1;
    }
    return out;
}

std::size_t size_param(const ApiRequest& request, std::string_view name, std::size_t fallback) {
    auto text = request.param(name);
    if (!text) return fallback;
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
    if (ec != std::errc{} || ptr != text->data() + text->size()) {
        throw InvalidArgumentError("query parameter '" + std::string(name) + "' must be a nonnegative integer");
    }
    return value;
}

// Requested metric ids, validated; defaults to every registered metric.
std::vector<std::string> metric_list(const ApiRequest& request, const MetricRegistry& registry) {
    auto text = request.param("metrics");
    if (!text || trim(*text).empty()) return registry.ids();
    auto ids = split_list(*text);
    for (const auto& id : ids) registry.require(id);
    return ids;
}

std::string setting_text(const ordered_json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_array()) {
        std::string out;
        for (std::size_t i = 0; i < value.size(); ++i) {
            if (i) out += ",";
            out += setting_text(value[i]);
        }
        return out;
    }
    if (value.is_null()) return "";
    return value.dump();
}

ordered_json parse_body(const ApiRequest& request) {
    if (trim(request.body).empty()) return ordered_json::object();
    auto body = ordered_json::parse(request.body);
    if (!body.is_object()) throw InvalidArgumentError("request body must be a JSON object");
    return body;
}

json features_json(const AuditSession& session) {
    const auto& schema = session.schema();
    json features = json::array();
    for (std::size_t f = 0; f < schema.feature_count(); ++f) {
        const auto& feature = schema.feature(f);
        features.push_back({{"name", feature.name},
                            {"binned", feature.binned},
                            {"values", feature.values},
                            {"counts", session.dataset_distribution().counts[f]}});
    }
    return json{{"label_column", schema.label_column()},
                {"prediction_column", schema.prediction_column()},
                {"positive_label", schema.positive_label()},
                {"features", std::move(features)}};
}

json cluster_json(const Clustering& clustering) {
    return json{{"k", clustering.config.k},
                {"seed", clustering.config.seed},
                {"max_iterations", clustering.config.max_iterations},
                {"tolerance", clustering.config.tolerance},
                {"iterations", clustering.model.iterations()},
                {"converged", clustering.model.converged()},
                {"inertia", clustering.model.inertia()}};
}

FeatureSelection selection_from(const ordered_json& node, const FeatureSchema& schema) {
    std::vector<std::pair<std::string, std::vector<std::string>>> by_name;
    auto values_of = [](const ordered_json& v) {
        std::vector<std::string> out;
        if (v.is_null()) return out;
        if (!v.is_array()) throw InvalidArgumentError("selected values must be an array of strings");
        for (const auto& x : v) out.push_back(x.get<std::string>());
        return out;
    };
    if (node.is_object()) {
        for (const auto& [name, values] : node.items()) by_name.emplace_back(name, values_of(values));
    } else if (node.is_array()) {
        for (const auto& item : node) {
            by_name.emplace_back(item.at("feature").get<std::string>(),
                                 values_of(item.contains("values") ? item["values"] : ordered_json()));
        }
    } else {
        throw InvalidArgumentError("'selection' must be an object or an array");
    }
    return make_selection(schema, by_name);
}

ApiResponse ok(json body) {
    return ApiResponse{200, std::move(body)};
}

}  // namespace

std::optional<std::string> ApiRequest::param(std::string_view name) const {
    auto it = query.find(std::string(name));
    if (it == query.end()) return std::nullopt;
    return it->second;
}

std::shared_ptr<AuditSession> SessionStore::create(LoadResult loaded, const ClusterConfig& cluster,
                                                   std::shared_ptr<const MetricRegistry> registry) {
    std::string id;
    {
        std::lock_guard lock(mutex_);
        id = "ds-" + std::to_string(next_id_++);
    }
    // Clustering runs outside the store lock.
    auto session = std::make_shared<AuditSession>(id, std::move(loaded), cluster, std::move(registry));
    std::lock_guard lock(mutex_);
    slots_[id] = Slot{session, Clock::now()};
    return session;
}

std::shared_ptr<AuditSession> SessionStore::get(std::string_view id) {
    std::lock_guard lock(mutex_);
    auto it = slots_.find(std::string(id));
    if (it == slots_.end()) throw NotFoundError("unknown dataset '" + std::string(id) + "'");
    it->second.last_access = Clock::now();
    return it->second.session;
}

bool SessionStore::erase(std::string_view id) {
    std::lock_guard lock(mutex_);
    return slots_.erase(std::string(id)) > 0;
}

std::size_t SessionStore::evict_idle(Clock::time_point now) {
    std::lock_guard lock(mutex_);
    std::size_t evicted = 0;
    for (auto it = slots_.begin(); it != slots_.end();) {
        if (now - it->second.last_access > idle_timeout_) {
            it = slots_.erase(it);
            ++evicted;
        } else {
            ++it;
        }
    }
    return evicted;
}

std::size_t SessionStore::size() const {
    std::lock_guard lock(mutex_);
    return slots_.size();
}

AuditService::AuditService(ServiceOptions options, std::shared_ptr<const MetricRegistry> registry)
    : options_(std::move(options)),
      registry_(registry ? std::move(registry)
                         : std::make_shared<const MetricRegistry>(MetricRegistry::with_defaults())),
      sessions_(options_.idle_timeout) {}

ApiResponse AuditService::handle(const ApiRequest& request) {
    sessions_.evict_idle(SessionStore::Clock::now());
    auto error = [](int status, const std::string& message) { return ApiResponse{status, json{{"error", message}}}; };
    try {
        return route(request);
    } catch (const NotFoundError& e) {
        return error(404, e.what());
    } catch (const RegistryError& e) {
        return error(400, e.what());
    } catch (const InvalidArgumentError& e) {
        return error(400, e.what());
    } catch (const ConfigError& e) {
        return error(400, e.what());
    } catch (const SchemaError& e) {
        return error(422, e.what());
    } catch (const LabelError& e) {
        return error(422, e.what());
    } catch (const EmptyDatasetError& e) {
        return error(422, e.what());
    } catch (const json::exception& e) {
        return error(400, std::string("malformed JSON: ") + e.what());
    } catch (const std::exception& e) {
        return error(500, e.what());
    }
}

ApiResponse AuditService::upload(const ApiRequest& request) {
    std::string csv;
    ordered_json settings = ordered_json::object();
    if (!request.form.empty()) {
        auto file = request.form.find("file");
        if (file == request.form.end()) throw InvalidArgumentError("multipart upload needs a 'file' field");
        csv = file->second;
        if (auto cfg = request.form.find("config"); cfg != request.form.end() && !trim(cfg->second).empty()) {
            settings = ordered_json::parse(cfg->second);
        }
    } else {
        auto body = parse_body(request);
        if (!body.contains("csv")) throw InvalidArgumentError("upload needs a 'csv' field or a multipart 'file'");
        csv = body["csv"].get<std::string>();
        if (body.contains("config")) settings = body["config"];
    }
    if (!settings.is_object()) throw InvalidArgumentError("'config' must be a JSON object");

    AuditConfig config;
    config.cluster = options_.default_cluster;
    for (const auto& [key, value] : settings.items()) apply_setting(config, key, setting_text(value));

    std::istringstream in(csv);
    auto loaded = load_dataset(in, config.ingest, "upload");
    auto session = sessions_.create(std::move(loaded), config.cluster, registry_);

    json body = features_json(*session);
    body["dataset_id"] = session->id();
    body["row_count"] = session->table().row_count();
    body["input_rows"] = session->input_rows();
    body["dropped_rows"] = session->dropped_rows();
    body["cluster"] = cluster_json(*session->clustering());
    return ok(std::move(body));
}

ApiResponse AuditService::route(const ApiRequest& request) {
    const auto parts = split_path(request.path);
    const auto& method = request.method;

    if (parts.size() == 1 && parts[0] == "health" && method == "GET") {
        return ok({{"status", "ok"}, {"tool_version", std::string(tool_version)}, {"sessions", sessions_.size()}});
    }
    if (parts.empty() || parts[0] != "datasets") throw NotFoundError("no route for " + request.path);
    if (parts.size() == 1) {
        if (method == "POST") return upload(request);
        throw NotFoundError("no route for " + method + " " + request.path);
    }

    auto session = sessions_.get(parts[1]);
    const auto& schema = session->schema();
    const auto& registry = session->registry();

    if (parts.size() == 2) {
        if (method == "DELETE") {
            sessions_.erase(parts[1]);
            return ok({{"deleted", parts[1]}});
        }
        if (method == "GET") {
            json body = features_json(*session);
            body["dataset_id"] = session->id();
            body["row_count"] = session->table().row_count();
            return ok(std::move(body));
        }
    }

    const std::string& resource = parts.size() > 2 ? parts[2] : std::string();

    if (parts.size() == 3 && resource == "features" && method == "GET") {
        auto metrics = metric_list(request, registry);
        json body = features_json(*session);
        body["dataset_id"] = session->id();
        body["row_count"] = session->table().row_count();
        body["dropped_rows"] = session->dropped_rows();
        body["dataset_averages"] = dataset_averages(*session, metrics);
        return ok(std::move(body));
    }

    if (parts.size() == 3 && resource == "groups") {
        if (method == "POST") {
            auto body = parse_body(request);
            if (!body.contains("selection")) throw InvalidArgumentError("empty selection");
            auto selection = selection_from(body["selection"], schema);
            std::vector<std::string> metrics = registry.ids();
            if (body.contains("metrics")) {
                metrics = body["metrics"].get<std::vector<std::string>>();
                for (const auto& id : metrics) registry.require(id);
            }
            json groups = json::array();
            for (const auto& g : session->generate(selection)) groups.push_back(group_summary(*g, schema, metrics));
            return ok({{"groups", std::move(groups)}, {"dataset_averages", dataset_averages(*session, metrics)}});
        }
        if (method == "GET") {
            auto metrics = metric_list(request, registry);
            const auto min_size = size_param(request, "min_size", 0);
            json groups = json::array();
            const auto all = session->user_groups();
            for (const auto& g : filter_by_size(all, min_size)) groups.push_back(group_summary(*g, schema, metrics));
            return ok({{"groups", std::move(groups)}, {"dataset_averages", dataset_averages(*session, metrics)}});
        }
    }

    if (parts.size() == 3 && resource == "suggested" && method == "GET") {
        const std::string sort = request.param("sort").value_or("accuracy");
        registry.require(sort);
        const std::string order_text = request.param("order").value_or("worst");
        const auto order = parse_sort_order(order_text);
        auto metrics = metric_list(request, registry);
        const auto min_size = size_param(request, "min_size", default_min_size);
        const auto limit = size_param(request, "limit", SIZE_MAX);
        json groups = json::array();
        for (const auto& g : session->suggestions(sort, min_size, limit, order)) {
            groups.push_back(group_summary(*g, schema, metrics));
        }
        return ok({{"sort", sort},
                   {"order", order_text},
                   {"min_size", min_size},
                   {"groups", std::move(groups)},
                   {"cluster", cluster_json(*session->clustering())},
                   {"dataset_averages", dataset_averages(*session, metrics)}});
    }

    if (parts.size() == 3 && resource == "cluster" && method == "POST") {
        auto body = parse_body(request);
        AuditConfig config;
        config.cluster = session->clustering()->config;
        for (const auto& [key, value] : body.items()) {
            if (key != "k" && key != "seed" && key != "max_iterations" && key != "tolerance") {
                throw InvalidArgumentError("unknown clustering setting '" + key + "'");
            }
            apply_setting(config, key, setting_text(value));
        }
        session->recluster(config.cluster);
        return ok({{"cluster", cluster_json(*session->clustering())}});
    }

    if (parts.size() == 5 && resource == "groups" && parts[4] == "similar" && method == "GET") {
        auto source = session->find(parts[3]);
        SimilarQuery query;
        query.sort_metric = request.param("sort").value_or("accuracy");
        query.order = parse_sort_order(request.param("order").value_or("worst"));
        query.min_size = size_param(request, "min_size", default_min_size);
        query.limit = size_param(request, "limit", 10);
        auto metrics = metric_list(request, registry);
        json similar = json::array();
        for (const auto& r : session->similar(parts[3], query)) similar.push_back(similarity_json(r, *session, metrics));
        json body{{"source", group_summary(*source, schema, metrics)},
                  {"sort", query.sort_metric},
                  {"similar", std::move(similar)}};
        if (source->spec.kind == GroupKind::predicate) {
            const auto radius = size_param(request, "radius", 1);
            const std::string metric = request.param("metric").value_or(query.sort_metric);
            json neighbors = json::array();
            for (const auto& n : session->counterfactual(parts[3], static_cast<int>(radius), metric)) {
                neighbors.push_back(counterfactual_json(n, schema, metrics));
            }
            body["counterfactual"] = {{"radius", radius}, {"metric", metric}, {"neighbors", std::move(neighbors)}};
        }
        return ok(std::move(body));
    }

    if (parts.size() == 3 && resource == "detail" && method == "GET") {
        auto pinned = request.param("pinned");
        auto hovered = request.param("hovered");
        if (!pinned && !hovered) throw InvalidArgumentError("detail needs 'pinned' and/or 'hovered'");
        json body;
        body["pinned"] = pinned ? detail_json(*session->find(*pinned), schema) : json(nullptr);
        body["hovered"] = hovered ? detail_json(*session->find(*hovered), schema) : json(nullptr);
        body["dataset_averages"] = dataset_averages(*session, registry.ids());
        return ok(std::move(body));
    }

    if (parts.size() == 3 && resource == "selection") {
        if (method == "PUT" || method == "POST") {
            auto body = parse_body(request);
            auto read = [&](const char* key) -> std::optional<std::string> {
                if (!body.contains(key) || body[key].is_null()) return std::nullopt;
                return body[key].get<std::string>();
            };
            auto pinned = read("pinned");
            auto hovered = read("hovered");
            if (pinned && hovered && *pinned == *hovered) {
                throw InvalidArgumentError("pinned and hovered must be different groups");
            }
            session->set_pinned(pinned);
            session->set_hovered(hovered);
        }
        if (method == "PUT" || method == "POST" || method == "GET") {
            auto p = session->pinned();
            auto h = session->hovered();
            return ok({{"pinned", p ? json(*p) : json(nullptr)}, {"hovered", h ? json(*h) : json(nullptr)}});
        }
    }

    if (parts.size() == 3 && resource == "export" && method == "POST") {
        auto body = parse_body(request);
        std::vector<std::string> ids;
        if (body.contains("ids")) {
            ids = body["ids"].get<std::vector<std::string>>();
        } else {
            if (auto p = session->pinned()) ids.push_back(*p);
            if (auto h = session->hovered()) ids.push_back(*h);
        }
        if (ids.empty()) throw InvalidArgumentError("nothing to export: pass 'ids' or pin a group");
        std::vector<GroupRef> groups;
        for (const auto& id : ids) groups.push_back(session->find(id));
        return ok(export_document(session->id(), groups, schema));
    }

    throw NotFoundError("no route for " + method + " " + request.path);
}

}  // namespace fairaudit
