#include "qorch/engine/process.hpp"

#include <set>

namespace qorch::engine {

std::string to_string(TaskKind k) {
    switch (k) {
        case TaskKind::Service: return "service";
        case TaskKind::BusinessRule: return "business-rule";
        case TaskKind::CallActivity: return "call-activity";
    }
    throw std::logic_error("unreachable task kind");
}

TaskKind task_kind_from_string(const std::string& s) {
    if (s == "service") return TaskKind::Service;
    if (s == "business-rule") return TaskKind::BusinessRule;
    if (s == "call-activity") return TaskKind::CallActivity;
    throw std::invalid_argument("unknown task kind '" + s + "'");
}

std::vector<std::string> validate(const ProcessDefinition& def) {
    std::vector<std::string> errs;
    if (def.id.empty()) errs.push_back("definition id must not be empty");
    if (def.tasks.empty()) errs.push_back("definition needs at least one task");
    std::set<std::string> ids;
    for (const auto& t : def.tasks) {
        if (t.id.empty()) errs.push_back("task id must not be empty");
        if (!ids.insert(t.id).second) errs.push_back("duplicate task id '" + t.id + "'");
        switch (t.kind) {
            case TaskKind::Service:
                if (t.job_type.empty())
                    errs.push_back("service task '" + t.id + "' needs a job_type");
                if (!t.decision_id.empty() || !t.target.empty())
                    errs.push_back("service task '" + t.id + "' carries non-service fields");
                break;
            case TaskKind::BusinessRule:
                if (t.decision_id.empty())
                    errs.push_back("business-rule task '" + t.id + "' needs a decision_id");
                if (!t.job_type.empty() || !t.target.empty())
                    errs.push_back("business-rule task '" + t.id + "' carries non-rule fields");
                break;
            case TaskKind::CallActivity:
                if (t.target.empty())
                    errs.push_back("call-activity task '" + t.id + "' needs a target");
                if (!t.job_type.empty() || !t.decision_id.empty())
                    errs.push_back("call-activity task '" + t.id + "' carries non-call fields");
                break;
        }
        if (t.optional && t.flag.empty())
            errs.push_back("optional task '" + t.id + "' needs a flag variable");
    }
    return errs;
}

void to_json(json& j, const TaskDef& t) {
    j = {{"id", t.id}, {"kind", to_string(t.kind)}};
    switch (t.kind) {
        case TaskKind::Service: j["job_type"] = t.job_type; break;
        case TaskKind::BusinessRule: j["decision_id"] = t.decision_id; break;
        case TaskKind::CallActivity:
            j["target"] = t.target;
            j["outputs"] = t.outputs;
            break;
    }
    if (t.optional) {
        j["optional"] = true;
        j["flag"] = t.flag;
    }
}

void from_json(const json& j, TaskDef& t) {
    t = TaskDef{};
    t.id = j.at("id").get<std::string>();
    t.kind = task_kind_from_string(j.at("kind").get<std::string>());
    t.job_type = j.value("job_type", std::string{});
    t.decision_id = j.value("decision_id", std::string{});
    t.target = j.value("target", std::string{});
    if (j.contains("outputs")) t.outputs = j.at("outputs").get<std::vector<std::string>>();
    t.optional = j.value("optional", false);
    t.flag = j.value("flag", std::string{});
}

void to_json(json& j, const ProcessDefinition& d) {
    j = {{"id", d.id}, {"version", d.version}, {"tasks", d.tasks}};
}

void from_json(const json& j, ProcessDefinition& d) {
    d = ProcessDefinition{};
    d.id = j.at("id").get<std::string>();
    d.version = j.value("version", 0);
    d.tasks = j.at("tasks").get<std::vector<TaskDef>>();
}

}  // namespace qorch::engine
