#include "qorch/server/core.hpp"

#include <chrono>
#include <fstream>

namespace qorch::server {

json load_core_config_file(const std::string& path, CoreConfig& out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    json j = json::parse(in);

    out.event_log_path = j.value("event_log", std::string{});
    out.max_qubits = j.value("max_qubits", domain::kMaxSimQubits);
    out.default_shots = j.value("shots_default", 1000);
    out.default_retries = j.value("retries", 3);
    out.default_lock_ms = j.value("lock_ms", std::int64_t{30000});
    out.poll_bound_ms = j.value("poll_bound_ms", std::int64_t{10000});
    out.root_definition = j.value("root_definition", std::string{"strategy-decision"});
    out.qaoa_defaults = j.value("qaoa_defaults", json::object());

    const auto dir = path.find_last_of('/') == std::string::npos
                         ? std::string{}
                         : path.substr(0, path.find_last_of('/') + 1);
    auto resolve = [&dir](const std::string& p) {
        return (p.empty() || p[0] == '/') ? p : dir + p;
    };

    if (j.contains("definitions"))
        for (const auto& f : j.at("definitions")) {
            std::ifstream df(resolve(f.get<std::string>()));
            if (!df) throw std::runtime_error("cannot open definition file " + f.dump());
            out.definitions.push_back(json::parse(df));
        }
    if (j.contains("device_registry")) {
        std::ifstream rf(resolve(j.at("device_registry").get<std::string>()));
        if (!rf) throw std::runtime_error("cannot open device registry");
        out.devices = json::parse(rf).get<std::vector<domain::DeviceDescriptor>>();
    }
    if (j.contains("decision_tables")) {
        std::ifstream tf(resolve(j.at("decision_tables").get<std::string>()));
        if (!tf) throw std::runtime_error("cannot open decision tables");
        out.decision_tables = json::parse(tf);
    }
    return j;
}

Core::Core(CoreConfig cfg, const Clock& clock)
    : cfg_(std::move(cfg)),
      clock_(clock),
      log_(cfg_.event_log_path.empty() ? engine::EventLog{} : engine::EventLog{cfg_.event_log_path}),
      broker_(clock),
      engine_(broker_, *this, log_, clock, cfg_.default_retries) {
    broker_.attach_engine(&engine_);
    decision_service_.load_json(cfg_.decision_tables);

    // Rebuild state from the journal, then refill the broker with jobs that
    // never finished. Locks do not survive a restart.
    if (!cfg_.event_log_path.empty()) {
        for (const auto& event : engine::EventLog::read_file(cfg_.event_log_path))
            engine_.apply_event(event);
        for (const auto& job : engine_.unfinished_jobs()) broker_.publish(job);
    }
    for (const auto& dj : cfg_.definitions) {
        auto def = dj.get<engine::ProcessDefinition>();
        if (!engine_.has_definition(def.id)) engine_.deploy(std::move(def));
    }
}

json Core::evaluate_decision(const std::string& decision_id, const json& facts) {
    // called from inside the engine; mu_ already held by the public caller
    return decision_service_.evaluate(decision_id, facts);
}

std::string Core::submit(const json& request) {
    if (!request.is_object()) throw BadRequest("request body must be a JSON object");
    const std::string kind = request.value("kind", std::string{});
    if (kind != "schedule" && kind != "knapsack")
        throw BadRequest("unknown kind '" + kind + "' (expected schedule or knapsack)");
    if (!request.contains("problem") || !request.at("problem").is_object())
        throw BadRequest("missing problem payload");

    std::unique_lock lk(mu_);
    if (!engine_.has_definition(cfg_.root_definition))
        throw BadRequest("root definition '" + cfg_.root_definition + "' is not deployed");
    const std::string id = engine_.create_instance(cfg_.root_definition, request);
    cv_.notify_all();
    return id;
}

json Core::status(const std::string& instance_id) const {
    std::unique_lock lk(mu_);
    if (!engine_.find_instance(instance_id))
        throw NotFound("unknown instance '" + instance_id + "'");
    return engine_.instance_snapshot(instance_id);
}

json Core::result(const std::string& instance_id) const {
    std::unique_lock lk(mu_);
    const auto* inst = engine_.find_instance(instance_id);
    if (!inst) throw NotFound("unknown instance '" + instance_id + "'");
    if (inst->status == "failed-incident")
        throw NotCompleted("instance failed: " + inst->incident);
    if (inst->status != "completed") throw NotCompleted("still running");
    if (!inst->variables.contains("solution"))
        throw NotCompleted("instance completed without a solution variable");
    return inst->variables.at("solution");
}

std::pair<std::string, int> Core::deploy(const json& definition) {
    engine::ProcessDefinition def;
    try {
        def = definition.get<engine::ProcessDefinition>();
    } catch (const json::exception& e) {
        throw BadRequest(std::string{"malformed definition: "} + e.what());
    }
    std::unique_lock lk(mu_);
    try {
        return engine_.deploy(std::move(def));
    } catch (const engine::DeployError& e) {
        throw BadRequest(e.what());
    }
}

json Core::devices() const {
    return json{{"devices", cfg_.devices}};
}

void Core::register_worker(const std::string& worker_id, const std::string& job_type,
                           int max_concurrent) {
    std::unique_lock lk(mu_);
    broker_.register_worker(worker_id, job_type, max_concurrent);
}

std::vector<broker::Job> Core::activate(const std::string& worker_id,
                                        const std::string& job_type, int max_jobs,
                                        std::int64_t lock_ms, std::int64_t poll_ms) {
    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::milliseconds(poll_ms);
    std::unique_lock lk(mu_);
    while (true) {
        auto jobs = broker_.activate(worker_id, job_type, max_jobs,
                                     lock_ms > 0 ? lock_ms : cfg_.default_lock_ms);
        if (!jobs.empty()) return jobs;
        if (poll_ms <= 0 || std::chrono::steady_clock::now() >= deadline) return {};
        cv_.wait_until(lk, deadline);
    }
}

broker::Ack Core::complete(const std::string& worker_id, const std::string& job_id,
                           const json& variables) {
    std::unique_lock lk(mu_);
    auto ack = broker_.complete(worker_id, job_id, variables);
    cv_.notify_all();
    return ack;
}

broker::Ack Core::fail(const std::string& worker_id, const std::string& job_id,
                       const std::string& message) {
    std::unique_lock lk(mu_);
    auto ack = broker_.fail(worker_id, job_id, message);
    cv_.notify_all();
    return ack;
}

int Core::sweep() {
    std::unique_lock lk(mu_);
    const int n = broker_.sweep_expired();
    if (n > 0) cv_.notify_all();
    return n;
}

std::string Core::create_instance(const std::string& definition_id, json variables) {
    std::unique_lock lk(mu_);
    const auto id = engine_.create_instance(definition_id, std::move(variables));
    cv_.notify_all();
    return id;
}

json Core::instance_variables(const std::string& instance_id) const {
    std::unique_lock lk(mu_);
    const auto* inst = engine_.find_instance(instance_id);
    if (!inst) throw NotFound("unknown instance '" + instance_id + "'");
    return inst->variables;
}

std::vector<json> Core::journal() const {
    std::unique_lock lk(mu_);
    return log_.events();
}

}  // namespace qorch::server
