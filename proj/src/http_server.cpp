#include "darts271/error.hpp"
#include "darts271/service.hpp"

#include <httplib.h>

#include <mutex>

namespace darts271::service {

using nlohmann::json;

struct ApiServer::Impl {
    LiveService& service;
    httplib::Server server;
    std::mutex state_mutex;
    bool listening = false;
    bool stopped = false;

    explicit Impl(LiveService& s) : service(s) {}
};

namespace {

void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

template <typename Handler>
void guarded(httplib::Response& res, Handler&& handler, int success = 200) {
    try {
        reply(res, success, handler());
    } catch (const ServiceError& e) {
        reply(res, e.status, e.body());
    } catch (const Error& e) {
        const int status = e.code() == ErrorCode::InvalidScore ? 422 : is_validation_error(e.code()) ? 400 : 500;
        reply(res, status, json{{"code", std::string(to_string(e.code()))}, {"message", e.what()}, {"detail", e.detail()}});
    } catch (const json::exception& e) {
        reply(res, 400, json{{"code", "MalformedRow"}, {"message", std::string("invalid JSON: ") + e.what()}, {"detail", json::object()}});
    } catch (const std::exception& e) {
        reply(res, 500, json{{"code", "Internal"}, {"message", e.what()}, {"detail", json::object()}});
    }
}

} // namespace

ApiServer::ApiServer(LiveService& service, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(service)) {
    auto& server = impl_->server;
    LiveService& svc = impl_->service;

    // The library default also sets SO_REUSEPORT, which would let two servers share a port.
    server.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });

    server.Get("/api/health", [&svc](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { return svc.health(); });
    });
    server.Get("/api/players", [&svc](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { return svc.players(); });
    });
    server.Post("/api/games", [&svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const json body = json::parse(req.body);
            return svc.create_game(body.value("p1", std::string{}), body.value("p2", std::string{}));
        }, 201);
    });
    server.Get("/api/games/:id", [&svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { return svc.get_game(req.path_params.at("id")); });
    });
    server.Post("/api/games/:id/rounds", [&svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { return svc.submit_round(req.path_params.at("id"), parse_round_request(json::parse(req.body))); });
    });
    server.Get("/api/export.csv", [&svc](const httplib::Request&, httplib::Response& res) {
        res.set_content(svc.export_csv(), "text/csv");
    });
    if (static_dir) server.set_mount_point("/", static_dir->string());
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
    auto& server = impl_->server;
    if (port == 0) {
        const int bound = server.bind_to_any_port(host);
        if (bound < 0) throw Error(ErrorCode::Io, "cannot bind " + host);
        return bound;
    }
    if (!server.bind_to_port(host, port)) {
        throw Error(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port) + " (port in use?)",
                    std::to_string(port));
    }
    return port;
}

void ApiServer::listen() {
    {
        std::lock_guard lock(impl_->state_mutex);
        if (impl_->stopped) return;
        impl_->listening = true;
    }
    impl_->server.listen_after_bind();
}

void ApiServer::stop() {
    if (!impl_) return;
    {
        std::lock_guard lock(impl_->state_mutex);
        if (impl_->stopped) return;
        impl_->stopped = true;
        if (!impl_->listening) return;
    }
    // listen() may not have entered the accept loop yet; stopping before that would be lost.
    impl_->server.wait_until_ready();
    impl_->server.stop();
}

} // namespace darts271::service
