// qorch-worker: hosts one or more job-type handlers against a remote broker.
// Run one process per type for a fully distributed deployment, or --all for
// a single process covering every type.

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include <unistd.h>

#include <CLI11.hpp>

#include "qorch/workers/harness.hpp"

using qorch::domain::json;

namespace {
std::atomic<bool> g_stop{false};
void handle_signal(int) { g_stop.store(true); }
}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qorch task worker"};
    std::string broker_url = "http://127.0.0.1:8080";
    std::string worker_id = "worker-" + std::to_string(::getpid());
    std::vector<std::string> types;
    bool all_types = false;
    std::string devices_file;
    std::string tables_file;
    std::string qaoa_file;
    int max_qubits = qorch::domain::kMaxSimQubits;
    int default_shots = 1000;
    int max_concurrent = 1;
    std::int64_t lock_ms = 30000;
    std::int64_t poll_ms = 2000;

    app.add_option("--broker", broker_url, "broker base URL");
    app.add_option("--id", worker_id, "worker id");
    app.add_option("--types", types, "job types to handle")->delimiter(',');
    app.add_flag("--all", all_types, "handle every known job type");
    app.add_option("--devices", devices_file, "device registry JSON (selection/execution)");
    app.add_option("--tables", tables_file, "decision tables JSON (device selection)");
    app.add_option("--qaoa-defaults", qaoa_file, "QAOA defaults JSON");
    app.add_option("--max-qubits", max_qubits, "simulator qubit cap");
    app.add_option("--shots", default_shots, "default shot count");
    app.add_option("--max-concurrent", max_concurrent, "jobs in flight per type");
    app.add_option("--lock-ms", lock_ms, "job lock duration");
    app.add_option("--poll-ms", poll_ms, "long-poll bound");
    CLI11_PARSE(app, argc, argv);

    if (!all_types && types.empty()) {
        std::cerr << "error: pass --types or --all" << std::endl;
        return 1;
    }

    try {
        qorch::workers::WorkerContext ctx;
        ctx.max_qubits = max_qubits;
        ctx.default_shots = default_shots;
        qorch::decisions::DecisionService tables;
        if (!devices_file.empty()) {
            std::ifstream in(devices_file);
            if (!in) throw std::runtime_error("cannot open " + devices_file);
            ctx.devices = json::parse(in).get<std::vector<qorch::domain::DeviceDescriptor>>();
        }
        if (!tables_file.empty()) {
            std::ifstream in(tables_file);
            if (!in) throw std::runtime_error("cannot open " + tables_file);
            tables.load_json(json::parse(in));
            ctx.decision_service = &tables;
        }
        if (!qaoa_file.empty()) {
            std::ifstream in(qaoa_file);
            if (!in) throw std::runtime_error("cannot open " + qaoa_file);
            ctx.qaoa_defaults = json::parse(in).get<qorch::qaoa::QaoaConfig>();
        }

        auto registry = qorch::workers::build_handler_registry(ctx);
        qorch::workers::HttpBrokerClient client(broker_url);
        qorch::workers::Worker worker(worker_id, client, {lock_ms, poll_ms, max_concurrent});

        if (all_types) {
            for (const auto& [type, handler] : registry) worker.add_binding(type, handler);
        } else {
            for (const auto& type : types) {
                auto it = registry.find(type);
                if (it == registry.end())
                    throw std::runtime_error("unknown job type '" + type + "'");
                worker.add_binding(type, it->second);
            }
        }

        worker.start();
        std::cout << worker_id << " polling " << broker_url << std::endl;
        std::signal(SIGINT, handle_signal);
        std::signal(SIGTERM, handle_signal);
        while (!g_stop.load()) std::this_thread::sleep_for(std::chrono::milliseconds(300));
        worker.stop();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
}
