#include "qorch/server/http.hpp"

#include <thread>

#include <httplib.h>

namespace qorch::server {

namespace {

void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
    try {
        return json::parse(req.body);
    } catch (const json::exception& e) {
        throw BadRequest(std::string{"malformed JSON body: "} + e.what());
    }
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
    try {
        fn();
    } catch (const BadRequest& e) {
        reply(res, 400, {{"error", e.what()}});
    } catch (const NotFound& e) {
        reply(res, 404, {{"error", e.what()}});
    } catch (const NotCompleted& e) {
        reply(res, 409, {{"error", e.what()}});
    } catch (const broker::UnregisteredWorker& e) {
        reply(res, 403, {{"error", e.what()}});
    } catch (const std::exception& e) {
        reply(res, 500, {{"error", e.what()}});
    }
}

}  // namespace

struct HttpServer::Impl {
    httplib::Server srv;
    std::thread listener;
};

HttpServer::HttpServer(Core& core) : core_(core), impl_(std::make_unique<Impl>()) {
    auto& srv = impl_->srv;
    // activate long-polls can hold connections, so give the server headroom
    srv.new_task_queue = [] { return new httplib::ThreadPool(16); };

    // --- gateway ------------------------------------------------------------
    srv.Post("/problems", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto id = core_.submit(parse_body(req));
            reply(res, 202, {{"instance_id", id}});
        });
    });
    srv.Get(R"(/instances/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { reply(res, 200, core_.status(req.matches[1])); });
    });
    srv.Get(R"(/instances/([^/]+)/result)",
            [this](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] { reply(res, 200, core_.result(req.matches[1])); });
            });
    srv.Post("/definitions", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto [id, version] = core_.deploy(parse_body(req));
            reply(res, 200, {{"id", id}, {"version", version}});
        });
    });
    srv.Get("/devices", [this](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { reply(res, 200, core_.devices()); });
    });

    // --- broker wire ----------------------------------------------------------
    srv.Post("/workers", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto body = parse_body(req);
            core_.register_worker(body.at("worker_id").get<std::string>(),
                                  body.at("job_type").get<std::string>(),
                                  body.value("max_concurrent", 1));
            reply(res, 200, {{"ok", true}});
        });
    });
    srv.Post("/jobs/activate", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto body = parse_body(req);
            const auto jobs = core_.activate(
                body.at("worker_id").get<std::string>(), body.at("job_type").get<std::string>(),
                body.value("max_jobs", 1), body.value("lock_ms", std::int64_t{0}),
                body.value("poll_ms", std::int64_t{0}));
            reply(res, 200, {{"jobs", jobs}});
        });
    });
    srv.Post(R"(/jobs/([^/]+)/complete)",
             [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                     const auto body = parse_body(req);
                     const auto ack =
                         core_.complete(body.at("worker_id").get<std::string>(),
                                        req.matches[1], body.value("variables", json::object()));
                     if (ack.ok) reply(res, 200, {{"ok", true}});
                     else reply(res, 409, {{"error", ack.error}});
                 });
             });
    srv.Post(R"(/jobs/([^/]+)/fail)",
             [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                     const auto body = parse_body(req);
                     const auto ack = core_.fail(body.at("worker_id").get<std::string>(),
                                                 req.matches[1],
                                                 body.value("message", std::string{}));
                     if (ack.ok) reply(res, 200, {{"ok", true}, {"requeued", ack.requeued}});
                     else reply(res, 409, {{"error", ack.error}});
                 });
             });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
    auto& srv = impl_->srv;
    if (port == 0) {
        port_ = srv.bind_to_any_port(host);
    } else {
        if (!srv.bind_to_port(host, port))
            throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
        port_ = port;
    }
    impl_->listener = std::thread([&srv] { srv.listen_after_bind(); });
    srv.wait_until_ready();
    return port_;
}

void HttpServer::stop() {
    if (!impl_) return;
    impl_->srv.stop();
    if (impl_->listener.joinable()) impl_->listener.join();
}

}  // namespace qorch::server
