#include <httplib.h>

#include "fairaudit/service.hpp"

namespace fairaudit {

struct HttpServer::Impl {
    AuditService& service;
    httplib::Server server;

    explicit Impl(AuditService& s) : service(s) {
        auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
            ApiRequest request;
            request.method = req.method;
            request.path = req.path;
            for (const auto& [k, v] : req.params) request.query.emplace(k, v);
            request.body = req.body;
            request.content_type = req.get_header_value("Content-Type");
            for (const auto& [name, part] : req.files) request.form[name] = part.content;
            ApiResponse response = service.handle(request);
            res.status = response.status;
            res.set_content(response.body.dump(), "application/json");
        };
        server.Get(".*", dispatch);
        server.Post(".*", dispatch);
        server.Put(".*", dispatch);
        server.Delete(".*", dispatch);
        server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
        server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                    {"Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS"},
                                    {"Access-Control-Allow-Headers", "Content-Type"}});
        server.set_payload_max_length(512ull << 20);
    }
};

HttpServer::HttpServer(AuditService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() {
    stop();
}

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::serve() {
    return impl_->server.listen_after_bind();
}

void HttpServer::stop() {
    if (impl_) impl_->server.stop();
}

}  // namespace fairaudit
