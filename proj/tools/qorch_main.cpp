// qorch: single-binary operator CLI. `serve` hosts the orchestrator (engine +
// broker + gateway, optionally with embedded workers); the other subcommands
// are thin HTTP clients against a running server.

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>

#include "qorch/server/http.hpp"
#include "qorch/workers/harness.hpp"

using qorch::domain::json;

namespace {

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop.store(true); }

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return json::parse(in);
}

// Shared client plumbing: POST/GET a path, print the response, map status to
// an exit code.
struct ApiClient {
    std::string server;

    json get(const std::string& path, int& status) {
        httplib::Client cli(server);
        auto res = cli.Get(path);
        if (!res) throw std::runtime_error("server unreachable at " + server);
        status = res->status;
        return res->body.empty() ? json::object() : json::parse(res->body);
    }
    json post(const std::string& path, const json& body, int& status) {
        httplib::Client cli(server);
        auto res = cli.Post(path, body.dump(), "application/json");
        if (!res) throw std::runtime_error("server unreachable at " + server);
        status = res->status;
        return res->body.empty() ? json::object() : json::parse(res->body);
    }
};

int run_serve(const std::string& config_path, int port_override) {
    qorch::server::CoreConfig cfg;
    const json raw = qorch::server::load_core_config_file(config_path, cfg);
    const int port = port_override > 0 ? port_override : raw.value("port", 8080);

    static qorch::SystemClock clock;
    qorch::server::Core core(cfg, clock);
    qorch::server::HttpServer http(core);
    const int bound = http.start("0.0.0.0", port);
    std::cout << "qorch serving on port " << bound << std::endl;

    // embedded workers, when the config asks for them
    qorch::workers::WorkerContext wctx;
    wctx.qaoa_defaults = cfg.qaoa_defaults.empty()
                             ? qorch::qaoa::QaoaConfig{}
                             : cfg.qaoa_defaults.get<qorch::qaoa::QaoaConfig>();
    wctx.max_qubits = cfg.max_qubits;
    wctx.default_shots = cfg.default_shots;
    wctx.devices = cfg.devices;
    wctx.decision_service = &core.decision_service();

    qorch::workers::InProcBrokerClient in_proc(core);
    qorch::workers::Worker embedded("embedded", in_proc, {cfg.default_lock_ms, 1000, 1});
    bool any_embedded = false;
    if (raw.contains("embed_workers")) {
        auto registry = qorch::workers::build_handler_registry(wctx);
        const auto& spec = raw.at("embed_workers");
        if (spec.is_string() && spec.get<std::string>() == "all") {
            for (const auto& [type, handler] : registry) {
                embedded.add_binding(type, handler);
                any_embedded = true;
            }
        } else if (spec.is_array()) {
            for (const auto& t : spec) {
                const auto type = t.get<std::string>();
                auto it = registry.find(type);
                if (it == registry.end())
                    throw std::runtime_error("embed_workers names unknown job type '" + type +
                                             "'");
                embedded.add_binding(type, it->second);
                any_embedded = true;
            }
        }
    }
    if (any_embedded) {
        embedded.start();
        std::cout << "embedded workers started" << std::endl;
    }

    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop.load()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(500));
        core.sweep();  // expire abandoned locks
    }
    std::cout << "shutting down" << std::endl;
    if (any_embedded) embedded.stop();
    http.stop();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum task orchestration service and client"};
    app.require_subcommand(1);
    std::string server = "http://127.0.0.1:8080";

    auto* serve = app.add_subcommand("serve", "run the orchestrator service");
    std::string config_path = "config/server.json";
    int port_override = 0;
    serve->add_option("--config", config_path, "server config file");
    serve->add_option("--port", port_override, "override the configured port");

    auto* submit = app.add_subcommand("submit", "submit a problem request");
    std::string submit_file;
    submit->add_option("--file", submit_file, "request JSON file")->required();
    submit->add_option("--server", server, "server base URL");

    auto* status = app.add_subcommand("status", "show a process instance");
    std::string status_id;
    status->add_option("id", status_id, "instance id")->required();
    status->add_option("--server", server, "server base URL");

    auto* result = app.add_subcommand("result", "fetch a completed instance's solution");
    std::string result_id;
    result->add_option("id", result_id, "instance id")->required();
    result->add_option("--server", server, "server base URL");

    auto* deploy = app.add_subcommand("deploy", "deploy a process definition");
    std::string definition_file;
    deploy->add_option("--definition", definition_file, "definition JSON file")->required();
    deploy->add_option("--server", server, "server base URL");

    auto* devices = app.add_subcommand("devices", "device registry commands");
    auto* devices_list = devices->add_subcommand("list", "list registered devices");
    devices_list->add_option("--server", server, "server base URL");

    CLI11_PARSE(app, argc, argv);

    try {
        if (serve->parsed()) return run_serve(config_path, port_override);

        ApiClient api{server};
        int http_status = 0;
        if (submit->parsed()) {
            const auto res = api.post("/problems", read_json_file(submit_file), http_status);
            std::cout << res.dump(2) << std::endl;
            return http_status == 202 ? 0 : 1;
        }
        if (status->parsed()) {
            const auto res = api.get("/instances/" + status_id, http_status);
            std::cout << res.dump(2) << std::endl;
            return http_status == 200 ? 0 : (http_status == 404 ? 2 : 1);
        }
        if (result->parsed()) {
            const auto res = api.get("/instances/" + result_id + "/result", http_status);
            std::cout << res.dump(2) << std::endl;
            if (http_status == 200) return 0;
            if (http_status == 404) return 2;
            if (http_status == 409) {
                std::cerr << "still running" << std::endl;
                return 3;
            }
            return 1;
        }
        if (deploy->parsed()) {
            const auto res = api.post("/definitions", read_json_file(definition_file),
                                      http_status);
            std::cout << res.dump(2) << std::endl;
            return http_status == 200 ? 0 : 1;
        }
        if (devices_list->parsed()) {
            const auto res = api.get("/devices", http_status);
            std::cout << res.dump(2) << std::endl;
            return http_status == 200 ? 0 : 1;
        }
        std::cerr << "devices requires a subcommand (list)" << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
}
