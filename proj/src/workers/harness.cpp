#include "qorch/workers/harness.hpp"

#include <httplib.h>

namespace qorch::workers {

// --- HttpBrokerClient -------------------------------------------------------

struct HttpBrokerClient::Impl {
    explicit Impl(std::string url) : base(std::move(url)), cli(base) {
        cli.set_connection_timeout(5, 0);
    }
    std::string base;
    httplib::Client cli;

    domain::json post(const std::string& path, const domain::json& body,
                      std::int64_t read_timeout_ms = 15000) {
        cli.set_read_timeout(read_timeout_ms / 1000, (read_timeout_ms % 1000) * 1000);
        auto res = cli.Post(path, body.dump(), "application/json");
        if (!res) throw ClientError("broker unreachable at " + base + path);
        domain::json parsed;
        try {
            parsed = domain::json::parse(res->body);
        } catch (const domain::json::exception&) {
            throw ClientError("malformed broker response from " + path);
        }
        parsed["_http_status"] = res->status;
        return parsed;
    }
};

HttpBrokerClient::HttpBrokerClient(std::string base_url)
    : impl_(std::make_unique<Impl>(std::move(base_url))) {}

HttpBrokerClient::~HttpBrokerClient() = default;

void HttpBrokerClient::register_worker(const std::string& worker_id,
                                       const std::string& job_type, int max_concurrent) {
    auto res = impl_->post("/workers", {{"worker_id", worker_id},
                                        {"job_type", job_type},
                                        {"max_concurrent", max_concurrent}});
    if (res.value("_http_status", 0) != 200)
        throw ClientError("worker registration failed: " + res.value("error", res.dump()));
}

std::vector<broker::Job> HttpBrokerClient::activate(const std::string& worker_id,
                                                    const std::string& job_type, int max_jobs,
                                                    std::int64_t lock_ms,
                                                    std::int64_t poll_ms) {
    auto res = impl_->post("/jobs/activate",
                           {{"worker_id", worker_id},
                            {"job_type", job_type},
                            {"max_jobs", max_jobs},
                            {"lock_ms", lock_ms},
                            {"poll_ms", poll_ms}},
                           poll_ms + 15000);
    if (res.value("_http_status", 0) != 200)
        throw ClientError("activate failed: " + res.value("error", res.dump()));
    return res.at("jobs").get<std::vector<broker::Job>>();
}

broker::Ack HttpBrokerClient::complete(const std::string& worker_id, const std::string& job_id,
                                       const domain::json& variables) {
    auto res = impl_->post("/jobs/" + job_id + "/complete",
                           {{"worker_id", worker_id}, {"variables", variables}});
    return {res.value("_http_status", 0) == 200, res.value("error", std::string{}),
            res.value("requeued", false)};
}

broker::Ack HttpBrokerClient::fail(const std::string& worker_id, const std::string& job_id,
                                   const std::string& message) {
    auto res = impl_->post("/jobs/" + job_id + "/fail",
                           {{"worker_id", worker_id}, {"message", message}});
    return {res.value("_http_status", 0) == 200, res.value("error", std::string{}),
            res.value("requeued", false)};
}

// --- Worker -----------------------------------------------------------------

Worker::Worker(std::string worker_id, BrokerClient& client, Options options)
    : worker_id_(std::move(worker_id)), client_(client), options_(options) {}

Worker::~Worker() { stop(); }

void Worker::add_binding(const std::string& job_type, Handler handler, int max_concurrent) {
    bindings_.push_back(
        {job_type, std::move(handler),
         max_concurrent > 0 ? max_concurrent : options_.max_concurrent});
}

void Worker::start() {
    if (running_.exchange(true)) return;
    if (!registered_) {
        for (const auto& b : bindings_)
            client_.register_worker(worker_id_, b.job_type, b.max_concurrent);
        registered_ = true;
    }
    for (const auto& b : bindings_)
        threads_.emplace_back([this, &b] { poll_loop(b); });
}

void Worker::stop() {
    if (!running_.exchange(false)) return;
    for (auto& t : threads_)
        if (t.joinable()) t.join();
    threads_.clear();
}

void Worker::poll_loop(const Binding& binding) {
    while (running_.load()) {
        std::vector<broker::Job> jobs;
        try {
            jobs = client_.activate(worker_id_, binding.job_type, binding.max_concurrent,
                                    options_.lock_ms, options_.poll_ms);
        } catch (const ClientError&) {
            std::this_thread::sleep_for(std::chrono::milliseconds(200));
            continue;
        }
        for (const auto& job : jobs) {
            if (!running_.load()) return;
            run_job(binding, job);
        }
    }
}

void Worker::run_job(const Binding& binding, const broker::Job& job) {
    try {
        const auto outputs = binding.handler(job.payload);
        client_.complete(worker_id_, job.id, outputs);
    } catch (const HandlerError& e) {
        client_.fail(worker_id_, job.id, e.what());
    } catch (const std::exception& e) {
        client_.fail(worker_id_, job.id, std::string{"internal error: "} + e.what());
    }
}

int Worker::drain_once() {
    if (!registered_) {
        for (const auto& b : bindings_)
            client_.register_worker(worker_id_, b.job_type, b.max_concurrent);
        registered_ = true;
    }
    int processed = 0;
    bool progressed = true;
    while (progressed) {
        progressed = false;
        for (const auto& b : bindings_) {
            auto jobs = client_.activate(worker_id_, b.job_type, b.max_concurrent,
                                         options_.lock_ms, 0);
            for (const auto& job : jobs) {
                run_job(b, job);
                ++processed;
                progressed = true;
            }
        }
    }
    return processed;
}

}  // namespace qorch::workers
