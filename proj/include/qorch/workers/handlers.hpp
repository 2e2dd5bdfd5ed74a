#pragma once

#include <functional>
#include <map>
#include <string>

#include "qorch/decisions/decisions.hpp"
#include "qorch/domain/types.hpp"
#include "qorch/qaoa/qaoa.hpp"

// Job handlers: pure functions from a job payload (variables snapshot) plus
// static worker configuration to output variables. A thrown HandlerError
// fails the job with its message.

namespace qorch::workers {

using domain::json;

struct HandlerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WorkerContext {
    qaoa::QaoaConfig qaoa_defaults;
    int max_qubits = domain::kMaxSimQubits;
    int default_shots = 1000;
    int classical_cap = 20;
    std::vector<domain::DeviceDescriptor> devices;
    const decisions::DecisionService* decision_service = nullptr;
    std::string device_table_id = "device-selection";
};

using Handler = std::function<json(const json& payload)>;

// Effective QAOA config for a payload: context defaults overlaid by the
// request's "qaoa" object.
qaoa::QaoaConfig effective_qaoa_config(const WorkerContext& ctx, const json& payload);

json problem_mapping_handler(const WorkerContext& ctx, const json& payload);
json circuit_generation_handler(const WorkerContext& ctx, const json& payload);
json device_selection_handler(const WorkerContext& ctx, const json& payload);
json circuit_refinement_handler(const WorkerContext& ctx, const json& payload);
json circuit_execution_handler(const WorkerContext& ctx, const json& payload);
json solution_mapping_handler(const WorkerContext& ctx, const json& payload);
json classical_strategy_handler(const WorkerContext& ctx, const json& payload);
json input_aggregation_handler(const WorkerContext& ctx, const json& payload);
json output_aggregation_handler(const WorkerContext& ctx, const json& payload);

// All job types this build ships, mapped to their handlers.
std::map<std::string, Handler> build_handler_registry(const WorkerContext& ctx);

// Display names for the in-memory reference store (input/output aggregation).
const std::map<std::string, std::string>& agent_directory();
const std::map<std::string, std::string>& container_manifest();

}  // namespace qorch::workers
