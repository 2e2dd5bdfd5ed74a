#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qorch/broker/clock.hpp"
#include "qorch/broker/job.hpp"
#include "qorch/engine/event_log.hpp"
#include "qorch/engine/process.hpp"

// The orchestrator: walks deployed definitions task by task, publishes
// service jobs to the broker, evaluates business rules inline, spawns
// sub-processes for call-activities, and journals every transition.
//
// The engine is a plain state machine with no internal locking; the hosting
// process serializes calls (engine and broker share one mutex domain).

namespace qorch::engine {

struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownDefinition : EngineError { using EngineError::EngineError; };
struct UnknownJob : EngineError { using EngineError::EngineError; };
struct StaleCompletion : EngineError { using EngineError::EngineError; };
struct DeployError : EngineError { using EngineError::EngineError; };

struct HistoryEntry {
    std::string task_id;
    std::string job_id;       // child instance id for call-activities, "" for rules
    std::int64_t started_ms = 0;
    std::int64_t finished_ms = 0;
    std::string outcome;      // running | completed | failed

    bool operator==(const HistoryEntry&) const = default;
};

void to_json(json& j, const HistoryEntry& h);

struct ProcessInstance {
    std::string id;
    std::string definition_id;
    int version = 0;
    std::string status = "running";  // running | completed | failed-incident
    int cursor = 0;
    json variables = json::object();
    std::vector<HistoryEntry> history;
    std::string parent_instance;
    std::string parent_task;
    std::string waiting_child;   // call-activity in flight
    std::string awaiting_job;    // service task in flight
    std::string incident;
};

// What the engine needs from the broker side.
struct BrokerPort {
    virtual ~BrokerPort() = default;
    virtual void publish(const broker::Job& job) = 0;
    virtual int retries_of(const std::string& job_id) const = 0;
    virtual void requeue_with_decrement(const std::string& job_id) = 0;
    virtual void mark_terminal(const std::string& job_id) = 0;
};

// Inline decision evaluation (business-rule tasks).
struct DecisionPort {
    virtual ~DecisionPort() = default;
    virtual json evaluate_decision(const std::string& decision_id, const json& facts) = 0;
};

class ProcessEngine {
  public:
    ProcessEngine(BrokerPort& broker, DecisionPort& decisions, EventLog& log,
                  const Clock& clock, int default_retries = 3);

    // Returns (id, version); redeploying an id bumps the version.
    std::pair<std::string, int> deploy(ProcessDefinition def);

    bool has_definition(const std::string& id) const;
    const ProcessDefinition* find_definition(const std::string& id, int version = 0) const;

    std::string create_instance(const std::string& definition_id, json initial_variables);

    // Outputs merge into the instance variables, the cursor advances and the
    // next task materializes. Throws UnknownJob / StaleCompletion on
    // duplicates; state is untouched in that case.
    void handle_job_completion(const std::string& job_id, const json& outputs);

    // Returns true when the job was requeued, false when the instance (and
    // any parents) went to failed-incident.
    bool handle_job_failure(const std::string& job_id, const std::string& message);

    const ProcessInstance* find_instance(const std::string& id) const;
    json instance_snapshot(const std::string& id) const;

    // --- replay -------------------------------------------------------------
    // Applies one journal event to in-memory state without emitting or
    // touching the broker. After feeding the whole journal, publish
    // unfinished_jobs() into a fresh broker.
    void apply_event(const json& event);
    std::vector<broker::Job> unfinished_jobs() const;

  private:
    struct JobRef { std::string instance_id; std::string task_id; };

    const ProcessDefinition& definition_for(const ProcessInstance& inst) const;
    std::string fresh_instance_id();
    std::string fresh_job_id();
    void note_id(const std::string& id, const std::string& prefix, std::int64_t& counter);
    std::string create_internal(const std::string& definition_id, json variables,
                                const std::string& parent_instance,
                                const std::string& parent_task);
    void advance(ProcessInstance& inst);
    void complete_instance(ProcessInstance& inst);
    void raise_incident(ProcessInstance& inst, const std::string& message);
    HistoryEntry* open_history(ProcessInstance& inst);
    void emit(json event);

    BrokerPort& broker_;
    DecisionPort& decisions_;
    EventLog& log_;
    const Clock& clock_;
    int default_retries_;
    bool replaying_ = false;

    std::map<std::string, std::vector<ProcessDefinition>> definitions_;
    std::map<std::string, ProcessInstance> instances_;
    std::map<std::string, JobRef> jobs_;
    std::map<std::string, broker::Job> pending_jobs_;  // replay bookkeeping
    std::int64_t instance_counter_ = 0;
    std::int64_t job_counter_ = 0;
};

}  // namespace qorch::engine
