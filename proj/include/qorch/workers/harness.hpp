#pragma once

#include <atomic>
#include <string>
#include <thread>
#include <vector>

#include "qorch/workers/broker_client.hpp"
#include "qorch/workers/handlers.hpp"

namespace qorch::workers {

struct WorkerOptions {
    std::int64_t lock_ms = 30000;
    std::int64_t poll_ms = 1000;
    int max_concurrent = 1;
};

// Registration, polling loop and graceful shutdown shared by every worker
// process. One polling thread per registered job type; each thread activates
// up to max_concurrent jobs and runs its handler on them.
class Worker {
  public:
    using Options = WorkerOptions;

    Worker(std::string worker_id, BrokerClient& client, Options options = {});
    ~Worker();

    Worker(const Worker&) = delete;
    Worker& operator=(const Worker&) = delete;

    void add_binding(const std::string& job_type, Handler handler, int max_concurrent = 0);

    // Registers every binding and spawns the polling threads.
    void start();
    void stop();

    // Drains queues until an activate returns empty, then returns. Serves
    // deterministic single-threaded tests (no polling threads involved).
    int drain_once();

  private:
    struct Binding {
        std::string job_type;
        Handler handler;
        int max_concurrent;
    };

    void poll_loop(const Binding& binding);
    void run_job(const Binding& binding, const broker::Job& job);

    std::string worker_id_;
    BrokerClient& client_;
    Options options_;
    std::vector<Binding> bindings_;
    std::vector<std::thread> threads_;
    std::atomic<bool> running_{false};
    bool registered_ = false;
};

}  // namespace qorch::workers
