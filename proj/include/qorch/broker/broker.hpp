#pragma once

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qorch/broker/clock.hpp"
#include "qorch/broker/job.hpp"
#include "qorch/engine/engine.hpp"

// Type-routed job distribution between the engine and remote workers:
// pull-based activation with a lock + deadline per job, FIFO per type.
// Like the engine, the broker holds no internal lock; the hosting process
// serializes access (both live behind one mutex in the server core).

namespace qorch::broker {

struct Ack {
    bool ok = false;
    std::string error;
    bool requeued = false;
};

struct BrokerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DuplicateJob : BrokerError { using BrokerError::BrokerError; };
struct UnregisteredWorker : BrokerError { using BrokerError::BrokerError; };

class JobBroker final : public engine::BrokerPort {
  public:
    explicit JobBroker(const Clock& clock) : clock_(clock) {}

    // The engine consuming completion/failure callbacks. Must outlive the broker.
    void attach_engine(engine::ProcessEngine* engine) { engine_ = engine; }

    void register_worker(const std::string& worker_id, const std::string& job_type,
                         int max_concurrent = 1);
    bool is_registered(const std::string& worker_id, const std::string& job_type) const;

    // Locks up to max_jobs queued jobs of the type for this worker. Expired
    // locks are swept first. Throws UnregisteredWorker.
    std::vector<Job> activate(const std::string& worker_id, const std::string& job_type,
                              int max_jobs, std::int64_t lock_ms);

    Ack complete(const std::string& worker_id, const std::string& job_id, const json& outputs);
    Ack fail(const std::string& worker_id, const std::string& job_id,
             const std::string& message);

    // Routes every expired lock through the engine's failure handling
    // (requeue or terminal). Returns the number of expired locks.
    int sweep_expired();

    const Job* find(const std::string& job_id) const;
    size_t queued_count(const std::string& job_type) const;

    // BrokerPort (engine side)
    void publish(const Job& job) override;  // throws DuplicateJob
    int retries_of(const std::string& job_id) const override;
    void requeue_with_decrement(const std::string& job_id) override;
    void mark_terminal(const std::string& job_id) override;

  private:
    Ack validate_lock(const std::string& worker_id, const std::string& job_id, Job** out);

    const Clock& clock_;
    engine::ProcessEngine* engine_ = nullptr;
    std::map<std::string, Job> jobs_;
    std::map<std::string, std::deque<std::string>> queues_;  // job_type -> FIFO of job ids
    std::map<std::string, std::map<std::string, int>> registrations_;  // type -> worker -> max
};

}  // namespace qorch::broker
