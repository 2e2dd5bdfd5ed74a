#include "qorch/engine/engine.hpp"

#include <algorithm>
#include <cstdio>

namespace qorch::engine {

void to_json(json& j, const HistoryEntry& h) {
    j = {{"task_id", h.task_id},
         {"job_id", h.job_id},
         {"started_ms", h.started_ms},
         {"finished_ms", h.finished_ms},
         {"outcome", h.outcome}};
}

ProcessEngine::ProcessEngine(BrokerPort& broker, DecisionPort& decisions, EventLog& log,
                             const Clock& clock, int default_retries)
    : broker_(broker),
      decisions_(decisions),
      log_(log),
      clock_(clock),
      default_retries_(default_retries) {}

void ProcessEngine::emit(json event) {
    if (replaying_) return;
    event["ts"] = clock_.now_ms();
    log_.append(event);
}

std::pair<std::string, int> ProcessEngine::deploy(ProcessDefinition def) {
    auto errs = validate(def);
    if (!errs.empty()) {
        std::string msg = "invalid definition";
        for (const auto& e : errs) msg += "; " + e;
        throw DeployError(msg);
    }
    auto& versions = definitions_[def.id];
    def.version = static_cast<int>(versions.size()) + 1;
    versions.push_back(def);
    emit({{"event", "deployed"}, {"definition", def}});
    return {def.id, def.version};
}

bool ProcessEngine::has_definition(const std::string& id) const {
    return definitions_.contains(id);
}

const ProcessDefinition* ProcessEngine::find_definition(const std::string& id,
                                                        int version) const {
    auto it = definitions_.find(id);
    if (it == definitions_.end() || it->second.empty()) return nullptr;
    if (version == 0) return &it->second.back();
    if (version < 1 || version > static_cast<int>(it->second.size())) return nullptr;
    return &it->second[static_cast<size_t>(version - 1)];
}

const ProcessDefinition& ProcessEngine::definition_for(const ProcessInstance& inst) const {
    const auto* def = find_definition(inst.definition_id, inst.version);
    if (!def) throw EngineError("definition '" + inst.definition_id + "' v" +
                                std::to_string(inst.version) + " missing");
    return *def;
}

std::string ProcessEngine::fresh_instance_id() {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "inst-%06lld", static_cast<long long>(++instance_counter_));
    return buf;
}

std::string ProcessEngine::fresh_job_id() {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "job-%06lld", static_cast<long long>(++job_counter_));
    return buf;
}

void ProcessEngine::note_id(const std::string& id, const std::string& prefix,
                            std::int64_t& counter) {
    if (id.rfind(prefix, 0) != 0) return;
    try {
        counter = std::max(counter, std::int64_t{std::stoll(id.substr(prefix.size()))});
    } catch (const std::exception&) {
        // foreign id scheme; counter untouched
    }
}

std::string ProcessEngine::create_instance(const std::string& definition_id,
                                           json initial_variables) {
    const std::string id =
        create_internal(definition_id, std::move(initial_variables), "", "");
    advance(instances_.at(id));
    return id;
}

std::string ProcessEngine::create_internal(const std::string& definition_id, json variables,
                                           const std::string& parent_instance,
                                           const std::string& parent_task) {
    const auto* def = find_definition(definition_id);
    if (!def) throw UnknownDefinition("unknown definition '" + definition_id + "'");
    ProcessInstance inst;
    inst.id = fresh_instance_id();
    inst.definition_id = def->id;
    inst.version = def->version;
    inst.variables = variables.is_object() ? std::move(variables) : json::object();
    inst.parent_instance = parent_instance;
    inst.parent_task = parent_task;
    const std::string id = inst.id;
    instances_[id] = std::move(inst);
    emit({{"event", "instance-created"},
          {"instance", id},
          {"definition", definition_id},
          {"version", def->version},
          {"variables", instances_.at(id).variables},
          {"parent_instance", parent_instance},
          {"parent_task", parent_task}});
    return id;
}

HistoryEntry* ProcessEngine::open_history(ProcessInstance& inst) {
    for (auto it = inst.history.rbegin(); it != inst.history.rend(); ++it)
        if (it->outcome == "running") return &*it;
    return nullptr;
}

void ProcessEngine::advance(ProcessInstance& inst) {
    while (inst.status == "running") {
        const auto& def = definition_for(inst);
        if (inst.cursor >= static_cast<int>(def.tasks.size())) {
            complete_instance(inst);
            return;
        }
        const TaskDef& task = def.tasks[static_cast<size_t>(inst.cursor)];
        const std::int64_t now = clock_.now_ms();

        if (task.optional && inst.variables.contains(task.flag) &&
            inst.variables[task.flag] == json(false)) {
            emit({{"event", "task-skipped"},
                  {"instance", inst.id},
                  {"task", task.id},
                  {"new_cursor", inst.cursor + 1}});
            ++inst.cursor;
            continue;
        }

        switch (task.kind) {
            case TaskKind::Service: {
                broker::Job job;
                job.id = fresh_job_id();
                job.job_type = task.job_type;
                job.instance_id = inst.id;
                job.payload = inst.variables;
                job.retries = default_retries_;
                jobs_[job.id] = {inst.id, task.id};
                inst.awaiting_job = job.id;
                inst.history.push_back({task.id, job.id, now, 0, "running"});
                emit({{"event", "job-published"},
                      {"job", job.id},
                      {"instance", inst.id},
                      {"task", task.id},
                      {"job_type", job.job_type},
                      {"retries", job.retries},
                      {"payload", job.payload},
                      {"started_ms", now}});
                broker_.publish(job);
                return;
            }
            case TaskKind::BusinessRule: {
                json out;
                try {
                    out = decisions_.evaluate_decision(task.decision_id, inst.variables);
                } catch (const std::exception& e) {
                    inst.history.push_back({task.id, "", now, now, "failed"});
                    raise_incident(inst, "decision '" + task.decision_id +
                                             "' failed: " + e.what());
                    return;
                }
                if (out.is_object())
                    for (const auto& [k, v] : out.items()) inst.variables[k] = v;
                inst.history.push_back({task.id, "", now, now, "completed"});
                emit({{"event", "decision-completed"},
                      {"instance", inst.id},
                      {"task", task.id},
                      {"outputs", out},
                      {"new_cursor", inst.cursor + 1},
                      {"started_ms", now},
                      {"finished_ms", now}});
                ++inst.cursor;
                continue;
            }
            case TaskKind::CallActivity: {
                std::string target = task.target;
                if (!target.empty() && target[0] == '$') {
                    const std::string var = target.substr(1);
                    if (!inst.variables.contains(var) || !inst.variables[var].is_string()) {
                        inst.history.push_back({task.id, "", now, now, "failed"});
                        raise_incident(inst, "call-activity target variable '" + var +
                                                 "' missing or not a string");
                        return;
                    }
                    target = inst.variables[var].get<std::string>();
                }
                if (!has_definition(target)) {
                    inst.history.push_back({task.id, "", now, now, "failed"});
                    raise_incident(inst, "unknown definition '" + target + "'");
                    return;
                }
                const std::string child_id =
                    create_internal(target, inst.variables, inst.id, task.id);
                inst.waiting_child = child_id;
                inst.history.push_back({task.id, child_id, now, 0, "running"});
                emit({{"event", "child-spawned"},
                      {"instance", inst.id},
                      {"task", task.id},
                      {"child", child_id},
                      {"started_ms", now}});
                advance(instances_.at(child_id));
                return;  // resumed by the child's completion
            }
        }
    }
}

void ProcessEngine::complete_instance(ProcessInstance& inst) {
    inst.status = "completed";
    emit({{"event", "instance-completed"}, {"instance", inst.id}});
    if (inst.parent_instance.empty()) return;

    auto pit = instances_.find(inst.parent_instance);
    if (pit == instances_.end()) return;
    ProcessInstance& parent = pit->second;
    if (parent.status != "running" || parent.waiting_child != inst.id) return;

    const auto& pdef = definition_for(parent);
    const TaskDef& ptask = pdef.tasks[static_cast<size_t>(parent.cursor)];
    json mapped = json::object();
    for (const auto& name : ptask.outputs)
        if (inst.variables.contains(name)) mapped[name] = inst.variables[name];
    for (const auto& [k, v] : mapped.items()) parent.variables[k] = v;

    const std::int64_t now = clock_.now_ms();
    if (auto* entry = open_history(parent)) {
        entry->outcome = "completed";
        entry->finished_ms = now;
    }
    emit({{"event", "task-completed"},
          {"instance", parent.id},
          {"task", ptask.id},
          {"job", inst.id},
          {"outputs", mapped},
          {"new_cursor", parent.cursor + 1},
          {"finished_ms", now}});
    parent.waiting_child.clear();
    ++parent.cursor;
    advance(parent);
}

void ProcessEngine::raise_incident(ProcessInstance& inst, const std::string& message) {
    if (inst.status != "running") return;
    inst.status = "failed-incident";
    inst.incident = message;
    const std::int64_t now = clock_.now_ms();
    if (auto* entry = open_history(inst)) {
        entry->outcome = "failed";
        entry->finished_ms = now;
    }
    emit({{"event", "incident"}, {"instance", inst.id}, {"message", message}});
    if (!inst.parent_instance.empty()) {
        auto pit = instances_.find(inst.parent_instance);
        if (pit != instances_.end() && pit->second.waiting_child == inst.id)
            raise_incident(pit->second,
                           "child instance " + inst.id + " failed: " + message);
    }
}

void ProcessEngine::handle_job_completion(const std::string& job_id, const json& outputs) {
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) throw UnknownJob("unknown job '" + job_id + "'");
    ProcessInstance& inst = instances_.at(it->second.instance_id);
    if (inst.status != "running" || inst.awaiting_job != job_id)
        throw StaleCompletion("job '" + job_id + "' is not the active job of instance " +
                              inst.id);

    if (outputs.is_object())
        for (const auto& [k, v] : outputs.items()) inst.variables[k] = v;
    const std::int64_t now = clock_.now_ms();
    if (auto* entry = open_history(inst)) {
        entry->outcome = "completed";
        entry->finished_ms = now;
    }
    emit({{"event", "task-completed"},
          {"instance", inst.id},
          {"task", it->second.task_id},
          {"job", job_id},
          {"outputs", outputs.is_object() ? outputs : json::object()},
          {"new_cursor", inst.cursor + 1},
          {"finished_ms", now}});
    inst.awaiting_job.clear();
    ++inst.cursor;
    advance(inst);
}

bool ProcessEngine::handle_job_failure(const std::string& job_id, const std::string& message) {
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) throw UnknownJob("unknown job '" + job_id + "'");
    const int retries = broker_.retries_of(job_id);
    if (retries > 0) {
        broker_.requeue_with_decrement(job_id);
        emit({{"event", "job-requeued"}, {"job", job_id}, {"retries_left", retries - 1}});
        return true;
    }
    broker_.mark_terminal(job_id);
    emit({{"event", "job-terminal"}, {"job", job_id}});
    ProcessInstance& inst = instances_.at(it->second.instance_id);
    raise_incident(inst, message);
    return false;
}

const ProcessInstance* ProcessEngine::find_instance(const std::string& id) const {
    auto it = instances_.find(id);
    return it == instances_.end() ? nullptr : &it->second;
}

json ProcessEngine::instance_snapshot(const std::string& id) const {
    const auto* inst = find_instance(id);
    if (!inst) throw EngineError("unknown instance '" + id + "'");
    const auto& def = definition_for(*inst);
    json j = {{"id", inst->id},
              {"definition_id", inst->definition_id},
              {"version", inst->version},
              {"status", inst->status},
              {"cursor", inst->cursor},
              {"history", inst->history}};
    if (inst->status == "running" && inst->cursor < static_cast<int>(def.tasks.size()))
        j["current_task"] = def.tasks[static_cast<size_t>(inst->cursor)].id;
    else
        j["current_task"] = nullptr;
    if (!inst->incident.empty()) j["incident"] = inst->incident;
    if (!inst->parent_instance.empty()) j["parent_instance"] = inst->parent_instance;
    if (!inst->waiting_child.empty()) j["waiting_child"] = inst->waiting_child;
    return j;
}

void ProcessEngine::apply_event(const json& event) {
    replaying_ = true;
    const std::string kind = event.at("event").get<std::string>();

    if (kind == "deployed") {
        ProcessDefinition def = event.at("definition").get<ProcessDefinition>();
        definitions_[def.id].push_back(def);
    } else if (kind == "instance-created") {
        ProcessInstance inst;
        inst.id = event.at("instance").get<std::string>();
        inst.definition_id = event.at("definition").get<std::string>();
        inst.version = event.at("version").get<int>();
        inst.variables = event.value("variables", json::object());
        inst.parent_instance = event.value("parent_instance", std::string{});
        inst.parent_task = event.value("parent_task", std::string{});
        note_id(inst.id, "inst-", instance_counter_);
        instances_[inst.id] = std::move(inst);
    } else if (kind == "child-spawned") {
        auto& inst = instances_.at(event.at("instance").get<std::string>());
        inst.waiting_child = event.at("child").get<std::string>();
        inst.history.push_back({event.at("task").get<std::string>(), inst.waiting_child,
                                event.value("started_ms", std::int64_t{0}), 0, "running"});
    } else if (kind == "job-published") {
        const std::string job_id = event.at("job").get<std::string>();
        const std::string instance_id = event.at("instance").get<std::string>();
        const std::string task_id = event.at("task").get<std::string>();
        jobs_[job_id] = {instance_id, task_id};
        note_id(job_id, "job-", job_counter_);
        auto& inst = instances_.at(instance_id);
        inst.awaiting_job = job_id;
        inst.history.push_back(
            {task_id, job_id, event.value("started_ms", std::int64_t{0}), 0, "running"});
        broker::Job job;
        job.id = job_id;
        job.job_type = event.at("job_type").get<std::string>();
        job.instance_id = instance_id;
        job.payload = event.value("payload", json::object());
        job.retries = event.value("retries", default_retries_);
        pending_jobs_[job_id] = std::move(job);
    } else if (kind == "decision-completed") {
        auto& inst = instances_.at(event.at("instance").get<std::string>());
        const json outs = event.value("outputs", json::object());
        if (outs.is_object())
            for (const auto& [k, v] : outs.items()) inst.variables[k] = v;
        const auto ts = event.value("started_ms", std::int64_t{0});
        inst.history.push_back({event.at("task").get<std::string>(), "", ts,
                                event.value("finished_ms", ts), "completed"});
        inst.cursor = event.at("new_cursor").get<int>();
    } else if (kind == "task-skipped") {
        auto& inst = instances_.at(event.at("instance").get<std::string>());
        inst.cursor = event.at("new_cursor").get<int>();
    } else if (kind == "task-completed") {
        auto& inst = instances_.at(event.at("instance").get<std::string>());
        const json outs = event.value("outputs", json::object());
        if (outs.is_object())
            for (const auto& [k, v] : outs.items()) inst.variables[k] = v;
        if (auto* entry = open_history(inst)) {
            entry->outcome = "completed";
            entry->finished_ms = event.value("finished_ms", std::int64_t{0});
        }
        const std::string ref = event.value("job", std::string{});
        if (inst.awaiting_job == ref) inst.awaiting_job.clear();
        if (inst.waiting_child == ref) inst.waiting_child.clear();
        inst.cursor = event.at("new_cursor").get<int>();
        pending_jobs_.erase(ref);
    } else if (kind == "instance-completed") {
        instances_.at(event.at("instance").get<std::string>()).status = "completed";
    } else if (kind == "incident") {
        auto& inst = instances_.at(event.at("instance").get<std::string>());
        inst.status = "failed-incident";
        inst.incident = event.value("message", std::string{});
        if (auto* entry = open_history(inst)) {
            entry->outcome = "failed";
            entry->finished_ms = event.value("ts", std::int64_t{0});
        }
    } else if (kind == "job-requeued") {
        auto it = pending_jobs_.find(event.at("job").get<std::string>());
        if (it != pending_jobs_.end())
            it->second.retries = event.at("retries_left").get<int>();
    } else if (kind == "job-terminal") {
        pending_jobs_.erase(event.at("job").get<std::string>());
    } else {
        throw EngineError("unknown event kind '" + kind + "' in journal");
    }
    replaying_ = false;
}

std::vector<broker::Job> ProcessEngine::unfinished_jobs() const {
    std::vector<broker::Job> jobs;
    for (const auto& [id, job] : pending_jobs_) jobs.push_back(job);
    return jobs;
}

}  // namespace qorch::engine
