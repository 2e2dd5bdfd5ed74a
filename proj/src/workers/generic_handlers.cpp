// Domain-independent handlers, shared verbatim between the scheduling and
// knapsack pipelines. This translation unit must not depend on the encoders
// module or any domain problem type: it sees only circuits, devices and
// measurement histograms.

#include "qorch/workers/handlers.hpp"

#include <algorithm>

#include "qorch/qaoa/statevector.hpp"
#include "qorch/qasm/qasm.hpp"

namespace qorch::workers {

json device_selection_handler(const WorkerContext& ctx, const json& payload) {
    if (!payload.contains("num_qubits"))
        throw HandlerError("missing variable 'num_qubits'");
    const int required = payload.at("num_qubits").get<int>();
    const int shots = payload.value("shots", ctx.default_shots);
    if (!ctx.decision_service)
        throw HandlerError("device selection has no decision service configured");
    try {
        const auto id = decisions::select_device(ctx.devices, *ctx.decision_service,
                                                 ctx.device_table_id, required, shots);
        return {{"device_id", id}};
    } catch (const decisions::NoCapableDevice& e) {
        throw HandlerError(e.what());
    } catch (const decisions::EvaluationError& e) {
        throw HandlerError(std::string{"device table evaluation failed: "} + e.what());
    }
}

json circuit_execution_handler(const WorkerContext& ctx, const json& payload) {
    const std::string device_id = payload.value("device_id", std::string{});
    auto dev = std::find_if(ctx.devices.begin(), ctx.devices.end(),
                            [&](const auto& d) { return d.id == device_id; });
    if (dev == ctx.devices.end())
        throw HandlerError("unknown device '" + device_id + "'");
    if (!dev->available) throw HandlerError("device '" + device_id + "' is unavailable");

    std::string text;
    if (payload.contains("bound_circuit_qasm"))
        text = payload.at("bound_circuit_qasm").get<std::string>();
    else if (payload.contains("circuit_qasm"))
        text = payload.at("circuit_qasm").get<std::string>();
    else
        throw HandlerError("missing variable 'bound_circuit_qasm'");

    domain::QuantumCircuit circuit;
    try {
        circuit = qasm::parse(text);
    } catch (const qasm::QasmError& e) {
        throw HandlerError(std::string{"circuit parse failed: "} + e.what());
    }
    if (!circuit.parameters.empty())
        throw HandlerError("unbound parameter '" + circuit.parameters.front() +
                           "': the circuit must be fully bound before execution");
    if (circuit.num_qubits > dev->max_qubits)
        throw HandlerError("circuit needs " + std::to_string(circuit.num_qubits) +
                           " qubits, device '" + device_id + "' has " +
                           std::to_string(dev->max_qubits));

    const int shots = payload.value("shots", ctx.default_shots);
    if (shots < 1) throw HandlerError("shots must be >= 1");

    // Sampling seed: a device seed pins the simulated hardware; otherwise the
    // request's rng seed drives it so documented runs stay reproducible.
    std::uint64_t seed = 0;
    if (dev->seed)
        seed = static_cast<std::uint64_t>(*dev->seed);
    else if (payload.contains("qaoa") && payload.at("qaoa").is_object())
        seed = payload.at("qaoa").value("rng_seed", std::uint64_t{0});

    const auto state = qaoa::simulate(circuit, {});
    const auto counts = qaoa::sample(state, shots, seed);
    return {{"counts", counts}};
}

}  // namespace qorch::workers
