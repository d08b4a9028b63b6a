// HTTP API for the audit UI.

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#include "fairaudit/service.hpp"

namespace {
fairaudit::HttpServer* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}
}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fairaudit HTTP service"};
    std::string host = "127.0.0.1";
    int port = 8080;
    long idle_minutes = 120;
    fairaudit::ServiceOptions options;
    app.add_option("--host", host, "Interface to bind");
    app.add_option("--port", port, "Port to bind (0 picks a free one)");
    app.add_option("--idle-minutes", idle_minutes, "Drop sessions idle this long");
    app.add_option("--k", options.default_cluster.k, "Default number of clusters");
    app.add_option("--seed", options.default_cluster.seed, "Default K-means++ seed");
    app.add_option("--max-iterations", options.default_cluster.max_iterations, "Default Lloyd iteration cap");
    app.add_option("--tolerance", options.default_cluster.tolerance, "Default centroid shift tolerance");
    CLI11_PARSE(app, argc, argv);

    options.idle_timeout = std::chrono::minutes(idle_minutes);
    fairaudit::AuditService service(options);
    fairaudit::HttpServer server(service);
    const int bound = server.bind(host, port);
    if (bound < 0) {
        std::cerr << "error: cannot bind " << host << ":" << port << "\n";
        return 1;
    }
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "listening on http://" << host << ":" << bound << std::endl;
    server.serve();
    return 0;
}
