#pragma once

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "qorch/domain/types.hpp"

// Decision-table evaluation (FIRST hit policy) for strategy selection and
// device selection, plus the device registry lookup built on top of it.

namespace qorch::decisions {

using domain::json;

struct Condition {
    std::string comparator;  // ==, !=, <, <=, >, >=, in
    json value;
};

struct Rule {
    // Conditions keyed by input name; inputs without a condition are wildcards.
    std::map<std::string, Condition> when;
    json output;  // object merged into the result
};

struct DecisionTable {
    std::string id;
    std::vector<std::string> inputs;
    std::vector<Rule> rules;
    std::string hit_policy = "FIRST";
    std::optional<json> default_output;
};

void from_json(const json& j, DecisionTable& t);
void to_json(json& j, const DecisionTable& t);

struct EvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool condition_holds(const Condition& c, const json& fact);

// First rule whose conditions all hold wins; falls back to default_output;
// throws EvaluationError on a missing fact or when nothing matches.
json evaluate(const DecisionTable& t, const json& facts);

// Thread-safe registry of hot-reloadable tables.
class DecisionService {
  public:
    void load(const std::vector<DecisionTable>& tables);
    void load_json(const json& tables_array);

    json evaluate(const std::string& table_id, const json& facts) const;
    bool has(const std::string& table_id) const;

  private:
    mutable std::shared_mutex mu_;
    std::map<std::string, DecisionTable> tables_;
};

// Walks the registry in order and returns the first device the table accepts
// (output {"accept": true}). The capability guard (available and
// max_qubits >= required_qubits) always applies on top of the table, so a
// rule can only restrict further. Facts per candidate: id, max_qubits,
// available, cost_per_shot, required_qubits, shots, enough_qubits.
struct NoCapableDevice : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string select_device(const std::vector<domain::DeviceDescriptor>& registry,
                          const DecisionService& service, const std::string& table_id,
                          int required_qubits, int shots);

}  // namespace qorch::decisions
