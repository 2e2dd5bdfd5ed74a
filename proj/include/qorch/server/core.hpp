#pragma once

#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "qorch/broker/broker.hpp"
#include "qorch/broker/clock.hpp"
#include "qorch/decisions/decisions.hpp"
#include "qorch/engine/engine.hpp"

// One process hosting the orchestrator: engine + broker + decision service +
// device registry behind a single mutex. Workers reach it either through the
// HTTP wire (remote) or an in-process client (tests, embedded workers) --
// both go through the same entry points below.

namespace qorch::server {

using domain::json;

struct BadRequest : std::runtime_error { using std::runtime_error::runtime_error; };
struct NotFound : std::runtime_error { using std::runtime_error::runtime_error; };
struct NotCompleted : std::runtime_error { using std::runtime_error::runtime_error; };

struct CoreConfig {
    std::string event_log_path;                  // empty: in-memory journal only
    std::vector<json> definitions;               // deployed at boot when absent
    std::vector<domain::DeviceDescriptor> devices;
    json decision_tables = json::array();
    json qaoa_defaults = json::object();
    int max_qubits = domain::kMaxSimQubits;
    int default_shots = 1000;
    int default_retries = 3;
    std::int64_t default_lock_ms = 30000;
    std::int64_t poll_bound_ms = 10000;
    std::string root_definition = "strategy-decision";
};

json load_core_config_file(const std::string& path, CoreConfig& out);  // returns raw json

class Core : public engine::DecisionPort {
  public:
    Core(CoreConfig cfg, const Clock& clock);

    // --- gateway --------------------------------------------------------
    std::string submit(const json& request);
    json status(const std::string& instance_id) const;
    json result(const std::string& instance_id) const;
    std::pair<std::string, int> deploy(const json& definition);
    json devices() const;

    // --- broker wire ------------------------------------------------------
    void register_worker(const std::string& worker_id, const std::string& job_type,
                         int max_concurrent);
    // Long-polls up to poll_ms (wall clock) when the queue is empty.
    std::vector<broker::Job> activate(const std::string& worker_id,
                                      const std::string& job_type, int max_jobs,
                                      std::int64_t lock_ms, std::int64_t poll_ms);
    broker::Ack complete(const std::string& worker_id, const std::string& job_id,
                         const json& variables);
    broker::Ack fail(const std::string& worker_id, const std::string& job_id,
                     const std::string& message);

    int sweep();  // expire locks (driven externally or by tests with a mock clock)

    // --- direct access (tests, embedded tooling); lock taken per call ----
    std::string create_instance(const std::string& definition_id, json variables);
    json instance_variables(const std::string& instance_id) const;
    const CoreConfig& config() const { return cfg_; }
    std::vector<json> journal() const;

    // DecisionPort
    json evaluate_decision(const std::string& decision_id, const json& facts) override;

    const decisions::DecisionService& decision_service() const { return decision_service_; }

  private:
    CoreConfig cfg_;
    const Clock& clock_;
    mutable std::mutex mu_;
    std::condition_variable cv_;
    engine::EventLog log_;
    decisions::DecisionService decision_service_;
    broker::JobBroker broker_;
    engine::ProcessEngine engine_;
};

}  // namespace qorch::server
