#pragma once

#include <cstdint>
#include <string>

#include "qorch/domain/types.hpp"

namespace qorch::broker {

using domain::json;

// Unit of work routed to workers by job_type. Lock fields are only
// meaningful while status == "locked"; completed and failed-terminal are
// absorbing.
struct Job {
    std::string id;
    std::string job_type;
    std::string instance_id;
    json payload = json::object();   // variables snapshot at materialization
    int retries = 3;
    std::string status = "queued";   // queued | locked | completed | failed-terminal
    std::string lock_owner;
    std::int64_t lock_deadline = 0;
    int attempt = 0;
};

inline void to_json(json& j, const Job& job) {
    j = {{"id", job.id},           {"job_type", job.job_type},
         {"instance_id", job.instance_id}, {"payload", job.payload},
         {"retries", job.retries}, {"status", job.status},
         {"attempt", job.attempt}};
}

inline void from_json(const json& j, Job& job) {
    job = Job{};
    job.id = j.at("id").get<std::string>();
    job.job_type = j.at("job_type").get<std::string>();
    job.instance_id = j.value("instance_id", std::string{});
    job.payload = j.value("payload", json::object());
    job.retries = j.value("retries", 3);
    job.status = j.value("status", std::string{"queued"});
    job.attempt = j.value("attempt", 0);
}

}  // namespace qorch::broker
