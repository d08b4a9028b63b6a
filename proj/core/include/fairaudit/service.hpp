#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "fairaudit/config.hpp"
#include "fairaudit/metrics.hpp"
#include "fairaudit/session.hpp"

namespace fairaudit {

/// Transport-neutral request as seen by the API layer.
struct ApiRequest {
    std::string method;
    std::string path;
    std::multimap<std::string, std::string> query;
    std::string body;
    std::string content_type;
    /// Multipart form fields by name (file uploads included).
    std::map<std::string, std::string> form;

    std::optional<std::string> param(std::string_view name) const;
};

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

struct ServiceOptions {
    /// Sessions untouched for this long are dropped on the next request.
    std::chrono::seconds idle_timeout{std::chrono::hours(2)};
    ClusterConfig default_cluster;
};

/// In-memory dataset sessions keyed by dataset id.
class SessionStore {
public:
    using Clock = std::chrono::steady_clock;

    explicit SessionStore(std::chrono::seconds idle_timeout) : idle_timeout_(idle_timeout) {}

    std::shared_ptr<AuditSession> create(LoadResult loaded, const ClusterConfig& cluster,
                                         std::shared_ptr<const MetricRegistry> registry);
    /// Throws NotFoundError; refreshes the idle timer.
    std::shared_ptr<AuditSession> get(std::string_view id);
    bool erase(std::string_view id);
    std::size_t evict_idle(Clock::time_point now);
    std::size_t size() const;

private:
    struct Slot {
        std::shared_ptr<AuditSession> session;
        Clock::time_point last_access;
    };
    std::chrono::seconds idle_timeout_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, Slot> slots_;
    std::size_t next_id_ = 1;
};

/// JSON API over audit sessions.
///
///   POST   /datasets                               upload (multipart: file, config)
///   GET    /datasets/{id}/features                 schema and dataset histograms
///   POST   /datasets/{id}/groups                   generate a Cartesian product
///   GET    /datasets/{id}/groups                   list generated groups
///   GET    /datasets/{id}/suggested                ranked cluster suggestions
///   POST   /datasets/{id}/cluster                  re-cluster with a new config
///   GET    /datasets/{id}/groups/{gid}/similar     JS neighbours and counterfactuals
///   GET    /datasets/{id}/detail                   pinned vs hovered comparison
///   PUT    /datasets/{id}/selection                record pinned/hovered ids
///   POST   /datasets/{id}/export                   export document
///   DELETE /datasets/{id}
class AuditService {
public:
    explicit AuditService(ServiceOptions options = {},
                          std::shared_ptr<const MetricRegistry> registry = nullptr);

    ApiResponse handle(const ApiRequest& request);
    SessionStore& sessions() { return sessions_; }

private:
    ApiResponse route(const ApiRequest& request);
    ApiResponse upload(const ApiRequest& request);

    ServiceOptions options_;
    std::shared_ptr<const MetricRegistry> registry_;
    SessionStore sessions_;
};

/// Blocking HTTP front end for an AuditService.
class HttpServer {
public:
    explicit HttpServer(AuditService& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds `host:port`; port 0 picks a free port. Returns the bound port or -1.
    int bind(const std::string& host, int port);
    /// Serves until stop() is called.
    bool serve();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace fairaudit
