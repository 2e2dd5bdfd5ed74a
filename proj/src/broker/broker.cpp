#include "qorch/broker/broker.hpp"

#include <algorithm>

namespace qorch::broker {

void JobBroker::register_worker(const std::string& worker_id, const std::string& job_type,
                                int max_concurrent) {
    if (worker_id.empty() || job_type.empty())
        throw BrokerError("worker id and job type must not be empty");
    registrations_[job_type][worker_id] = std::max(1, max_concurrent);
}

bool JobBroker::is_registered(const std::string& worker_id,
                              const std::string& job_type) const {
    auto it = registrations_.find(job_type);
    return it != registrations_.end() && it->second.contains(worker_id);
}

void JobBroker::publish(const Job& job) {
    if (jobs_.contains(job.id)) throw DuplicateJob("duplicate job id '" + job.id + "'");
    Job stored = job;
    stored.status = "queued";
    stored.lock_owner.clear();
    stored.lock_deadline = 0;
    jobs_[stored.id] = std::move(stored);
    queues_[job.job_type].push_back(job.id);
}

std::vector<Job> JobBroker::activate(const std::string& worker_id,
                                     const std::string& job_type, int max_jobs,
                                     std::int64_t lock_ms) {
    if (!is_registered(worker_id, job_type))
        throw UnregisteredWorker("worker '" + worker_id + "' is not registered for type '" +
                                 job_type + "'");
    sweep_expired();
    std::vector<Job> out;
    auto& queue = queues_[job_type];
    const std::int64_t now = clock_.now_ms();
    while (!queue.empty() && static_cast<int>(out.size()) < max_jobs) {
        const std::string id = queue.front();
        queue.pop_front();
        auto it = jobs_.find(id);
        if (it == jobs_.end() || it->second.status != "queued") continue;  // stale entry
        Job& job = it->second;
        job.status = "locked";
        job.lock_owner = worker_id;
        job.lock_deadline = now + lock_ms;
        ++job.attempt;
        out.push_back(job);
    }
    return out;
}

Ack JobBroker::validate_lock(const std::string& worker_id, const std::string& job_id,
                             Job** out) {
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) return {false, "unknown job '" + job_id + "'"};
    Job& job = it->second;
    if (job.status == "completed" || job.status == "failed-terminal")
        return {false, "job '" + job_id + "' already " + job.status};
    if (job.status != "locked") return {false, "job '" + job_id + "' is not locked"};
    if (job.lock_owner != worker_id)
        return {false, "lock lost: job '" + job_id + "' is held by '" + job.lock_owner + "'"};
    if (clock_.now_ms() >= job.lock_deadline) {
        // the lock just lapsed; route it through the normal expiry path
        sweep_expired();
        return {false, "lock expired for job '" + job_id + "'"};
    }
    *out = &job;
    return {true, ""};
}

Ack JobBroker::complete(const std::string& worker_id, const std::string& job_id,
                        const json& outputs) {
    Job* job = nullptr;
    Ack ack = validate_lock(worker_id, job_id, &job);
    if (!ack.ok) return ack;
    job->status = "completed";
    job->lock_owner.clear();
    if (engine_) {
        try {
            engine_->handle_job_completion(job_id, outputs);
        } catch (const engine::EngineError& e) {
            return {false, e.what()};
        }
    }
    return {true, ""};
}

Ack JobBroker::fail(const std::string& worker_id, const std::string& job_id,
                    const std::string& message) {
    Job* job = nullptr;
    Ack ack = validate_lock(worker_id, job_id, &job);
    if (!ack.ok) return ack;
    job->lock_owner.clear();
    bool requeued = false;
    if (engine_) {
        try {
            requeued = engine_->handle_job_failure(job_id, message);
        } catch (const engine::EngineError& e) {
            return {false, e.what()};
        }
    } else {
        // standalone broker (tests): apply the same retry rule locally
        if (job->retries > 0) {
            requeue_with_decrement(job_id);
            requeued = true;
        } else {
            mark_terminal(job_id);
        }
    }
    return {true, "", requeued};
}

int JobBroker::sweep_expired() {
    const std::int64_t now = clock_.now_ms();
    std::vector<std::string> expired;
    for (auto& [id, job] : jobs_)
        if (job.status == "locked" && now >= job.lock_deadline) expired.push_back(id);
    for (const auto& id : expired) {
        Job& job = jobs_.at(id);
        const std::string owner = job.lock_owner;
        job.lock_owner.clear();
        if (engine_) {
            engine_->handle_job_failure(id, "lock expired on worker '" + owner + "'");
        } else if (job.retries > 0) {
            requeue_with_decrement(id);
        } else {
            mark_terminal(id);
        }
    }
    return static_cast<int>(expired.size());
}

const Job* JobBroker::find(const std::string& job_id) const {
    auto it = jobs_.find(job_id);
    return it == jobs_.end() ? nullptr : &it->second;
}

size_t JobBroker::queued_count(const std::string& job_type) const {
    auto it = queues_.find(job_type);
    if (it == queues_.end()) return 0;
    size_t n = 0;
    for (const auto& id : it->second) {
        auto jit = jobs_.find(id);
        if (jit != jobs_.end() && jit->second.status == "queued") ++n;
    }
    return n;
}

int JobBroker::retries_of(const std::string& job_id) const {
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) throw BrokerError("unknown job '" + job_id + "'");
    return it->second.retries;
}

void JobBroker::requeue_with_decrement(const std::string& job_id) {
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) throw BrokerError("unknown job '" + job_id + "'");
    Job& job = it->second;
    job.retries = std::max(0, job.retries - 1);
    job.status = "queued";
    job.lock_owner.clear();
    job.lock_deadline = 0;
    queues_[job.job_type].push_back(job.id);
}

void JobBroker::mark_terminal(const std::string& job_id) {
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) throw BrokerError("unknown job '" + job_id + "'");
    it->second.status = "failed-terminal";
    it->second.lock_owner.clear();
}

}  // namespace qorch::broker
