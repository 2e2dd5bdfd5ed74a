#pragma once

#include <string>
#include <vector>

#include "qorch/domain/types.hpp"

// Declarative, linear process definitions: the unit the engine deploys and
// instantiates. Three task kinds: service (routed to workers through the
// broker by job type), business-rule (evaluated inline against a decision
// table) and call-activity (spawns a sub-process and waits for it).

namespace qorch::engine {

using domain::json;

enum class TaskKind { Service, BusinessRule, CallActivity };

std::string to_string(TaskKind k);
TaskKind task_kind_from_string(const std::string& s);

struct TaskDef {
    std::string id;
    TaskKind kind = TaskKind::Service;
    std::string job_type;      // service
    std::string decision_id;   // business-rule
    std::string target;        // call-activity: definition id, or "$var" to resolve at runtime
    std::vector<std::string> outputs;  // call-activity: child variables copied to the parent
    bool optional = false;
    std::string flag;          // variable guarding an optional task; skipped iff it equals false

    bool operator==(const TaskDef&) const = default;
};

struct ProcessDefinition {
    std::string id;
    int version = 0;  // assigned by the engine at deploy time
    std::vector<TaskDef> tasks;

    bool operator==(const ProcessDefinition&) const = default;
};

// Human-readable violations; empty means deployable.
std::vector<std::string> validate(const ProcessDefinition& def);

void to_json(json& j, const TaskDef& t);
void from_json(const json& j, TaskDef& t);
void to_json(json& j, const ProcessDefinition& d);
void from_json(const json& j, ProcessDefinition& d);

}  // namespace qorch::engine
