#include "qorch/decisions/decisions.hpp"

#include <algorithm>
#include <mutex>

namespace qorch::decisions {

void from_json(const json& j, DecisionTable& t) {
    t = DecisionTable{};
    t.id = j.at("id").get<std::string>();
    for (const auto& in : j.at("inputs")) {
        if (in.is_string()) t.inputs.push_back(in.get<std::string>());
        else t.inputs.push_back(in.at("name").get<std::string>());
    }
    for (const auto& rj : j.at("rules")) {
        Rule r;
        if (rj.contains("when")) {
            for (const auto& [name, cond] : rj.at("when").items()) {
                if (std::find(t.inputs.begin(), t.inputs.end(), name) == t.inputs.end())
                    throw std::invalid_argument("rule condition on undeclared input '" + name +
                                                "' in table '" + t.id + "'");
                if (!cond.is_object() || cond.size() != 1)
                    throw std::invalid_argument("condition for '" + name +
                                                "' must be a single {comparator: value} object");
                const auto it = cond.items().begin();
                r.when[name] = Condition{it.key(), it.value()};
            }
        }
        r.output = rj.at("output");
        t.rules.push_back(std::move(r));
    }
    t.hit_policy = j.value("hit_policy", std::string{"FIRST"});
    if (t.hit_policy != "FIRST")
        throw std::invalid_argument("unsupported hit policy '" + t.hit_policy + "'");
    if (j.contains("default_output") && !j.at("default_output").is_null())
        t.default_output = j.at("default_output");
    if (t.rules.empty() && !t.default_output)
        throw std::invalid_argument("table '" + t.id + "' needs at least one rule or a default");
}

void to_json(json& j, const DecisionTable& t) {
    j = {{"id", t.id}, {"hit_policy", t.hit_policy}};
    j["inputs"] = t.inputs;
    json rules = json::array();
    for (const auto& r : t.rules) {
        json rj;
        json when = json::object();
        for (const auto& [name, c] : r.when) when[name] = {{c.comparator, c.value}};
        rj["when"] = when;
        rj["output"] = r.output;
        rules.push_back(rj);
    }
    j["rules"] = rules;
    if (t.default_output) j["default_output"] = *t.default_output;
}

bool condition_holds(const Condition& c, const json& fact) {
    if (c.comparator == "==") return fact == c.value;
    if (c.comparator == "!=") return fact != c.value;
    if (c.comparator == "in") {
        if (!c.value.is_array())
            throw EvaluationError("'in' comparator needs an array value");
        return std::any_of(c.value.begin(), c.value.end(),
                           [&](const json& v) { return v == fact; });
    }
    if (!fact.is_number() || !c.value.is_number())
        throw EvaluationError("ordering comparator '" + c.comparator +
                              "' needs numeric operands");
    const double a = fact.get<double>();
    const double b = c.value.get<double>();
    if (c.comparator == "<") return a < b;
    if (c.comparator == "<=") return a <= b;
    if (c.comparator == ">") return a > b;
    if (c.comparator == ">=") return a >= b;
    throw EvaluationError("unknown comparator '" + c.comparator + "'");
}

json evaluate(const DecisionTable& t, const json& facts) {
    for (const auto& name : t.inputs)
        if (!facts.contains(name))
            throw EvaluationError("missing fact '" + name + "' for table '" + t.id + "'");

    for (const auto& rule : t.rules) {
        bool holds = true;
        for (const auto& [name, cond] : rule.when) {
            if (!condition_holds(cond, facts.at(name))) { holds = false; break; }
        }
        if (holds) return rule.output;
    }
    if (t.default_output) return *t.default_output;
    throw EvaluationError("no rule matched in table '" + t.id + "' and no default output");
}

void DecisionService::load(const std::vector<DecisionTable>& tables) {
    std::unique_lock lk(mu_);
    tables_.clear();
    for (const auto& t : tables) tables_[t.id] = t;
}

void DecisionService::load_json(const json& tables_array) {
    std::vector<DecisionTable> tables;
    for (const auto& tj : tables_array) tables.push_back(tj.get<DecisionTable>());
    load(tables);
}

json DecisionService::evaluate(const std::string& table_id, const json& facts) const {
    std::shared_lock lk(mu_);
    auto it = tables_.find(table_id);
    if (it == tables_.end()) throw EvaluationError("unknown decision table '" + table_id + "'");
    return decisions::evaluate(it->second, facts);
}

bool DecisionService::has(const std::string& table_id) const {
    std::shared_lock lk(mu_);
    return tables_.contains(table_id);
}

std::string select_device(const std::vector<domain::DeviceDescriptor>& registry,
                          const DecisionService& service, const std::string& table_id,
                          int required_qubits, int shots) {
    if (registry.empty()) throw NoCapableDevice("device registry is empty");
    for (const auto& d : registry) {
        const bool enough = d.max_qubits >= required_qubits;
        json facts = {{"id", d.id},
                      {"max_qubits", d.max_qubits},
                      {"available", d.available},
                      {"cost_per_shot", d.cost_per_shot},
                      {"required_qubits", required_qubits},
                      {"shots", shots},
                      {"enough_qubits", enough}};
        const json out = service.evaluate(table_id, facts);
        const bool accepted = out.is_object() && out.value("accept", false);
        if (accepted && d.available && enough) return d.id;
    }
    throw NoCapableDevice("no capable device for " + std::to_string(required_qubits) + " qubits");
}

}  // namespace qorch::decisions
