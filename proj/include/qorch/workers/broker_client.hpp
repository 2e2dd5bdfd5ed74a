#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qorch/broker/job.hpp"
#include "qorch/server/core.hpp"

// Client side of the broker wire protocol. Remote workers speak HTTP; tests
// and embedded workers use the in-process client against the same core.

namespace qorch::workers {

struct ClientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class BrokerClient {
  public:
    virtual ~BrokerClient() = default;
    virtual void register_worker(const std::string& worker_id, const std::string& job_type,
                                 int max_concurrent) = 0;
    virtual std::vector<broker::Job> activate(const std::string& worker_id,
                                              const std::string& job_type, int max_jobs,
                                              std::int64_t lock_ms, std::int64_t poll_ms) = 0;
    virtual broker::Ack complete(const std::string& worker_id, const std::string& job_id,
                                 const domain::json& variables) = 0;
    virtual broker::Ack fail(const std::string& worker_id, const std::string& job_id,
                             const std::string& message) = 0;
};

class InProcBrokerClient final : public BrokerClient {
  public:
    explicit InProcBrokerClient(server::Core& core) : core_(core) {}
    void register_worker(const std::string& worker_id, const std::string& job_type,
                         int max_concurrent) override {
        core_.register_worker(worker_id, job_type, max_concurrent);
    }
    std::vector<broker::Job> activate(const std::string& worker_id, const std::string& job_type,
                                      int max_jobs, std::int64_t lock_ms,
                                      std::int64_t poll_ms) override {
        return core_.activate(worker_id, job_type, max_jobs, lock_ms, poll_ms);
    }
    broker::Ack complete(const std::string& worker_id, const std::string& job_id,
                         const domain::json& variables) override {
        return core_.complete(worker_id, job_id, variables);
    }
    broker::Ack fail(const std::string& worker_id, const std::string& job_id,
                     const std::string& message) override {
        return core_.fail(worker_id, job_id, message);
    }

  private:
    server::Core& core_;
};

// HTTP client over the wire protocol (POST /workers, /jobs/activate,
// /jobs/{id}/complete, /jobs/{id}/fail).
class HttpBrokerClient final : public BrokerClient {
  public:
    explicit HttpBrokerClient(std::string base_url);
    ~HttpBrokerClient() override;

    void register_worker(const std::string& worker_id, const std::string& job_type,
                         int max_concurrent) override;
    std::vector<broker::Job> activate(const std::string& worker_id, const std::string& job_type,
                                      int max_jobs, std::int64_t lock_ms,
                                      std::int64_t poll_ms) override;
    broker::Ack complete(const std::string& worker_id, const std::string& job_id,
                         const domain::json& variables) override;
    broker::Ack fail(const std::string& worker_id, const std::string& job_id,
                     const std::string& message) override;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace qorch::workers
