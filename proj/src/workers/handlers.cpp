// Domain-dependent handlers: problem/solution mapping, circuit generation and
// refinement, the classical strategy, and input/output aggregation. The
// domain-independent handlers (device selection, circuit execution) live in
// generic_handlers.cpp and must stay free of this file's includes.

#include "qorch/workers/handlers.hpp"

#include <algorithm>
#include <cmath>

#include "qorch/encode/encoders.hpp"
#include "qorch/qasm/qasm.hpp"

namespace qorch::workers {

using domain::DomainSolution;
using domain::IsingModel;
using domain::KnapsackProblem;
using domain::MeasurementCounts;
using domain::SchedulingProblem;

namespace {

std::string require_kind(const json& payload) {
    const std::string kind = payload.value("kind", std::string{});
    if (kind != "schedule" && kind != "knapsack")
        throw HandlerError("unknown problem kind '" + kind + "'");
    return kind;
}

json require_object(const json& payload, const char* key) {
    if (!payload.contains(key))
        throw HandlerError(std::string{"missing variable '"} + key + "'");
    return payload.at(key);
}

template <typename P>
P parse_problem(const json& payload) {
    try {
        return require_object(payload, "problem").get<P>();
    } catch (const json::exception& e) {
        throw HandlerError(std::string{"malformed problem payload: "} + e.what());
    }
}

void throw_on_violations(const std::vector<std::string>& errs) {
    if (errs.empty()) return;
    std::string msg = errs.front();
    for (size_t i = 1; i < errs.size(); ++i) msg += "; " + errs[i];
    throw HandlerError(msg);
}

}  // namespace

qaoa::QaoaConfig effective_qaoa_config(const WorkerContext& ctx, const json& payload) {
    json merged = json(ctx.qaoa_defaults);
    if (payload.contains("qaoa") && payload.at("qaoa").is_object())
        for (const auto& [k, v] : payload.at("qaoa").items()) merged[k] = v;
    try {
        return merged.get<qaoa::QaoaConfig>();
    } catch (const std::exception& e) {
        throw HandlerError(std::string{"invalid qaoa config: "} + e.what());
    }
}

json problem_mapping_handler(const WorkerContext& ctx, const json& payload) {
    const std::string kind = require_kind(payload);
    IsingModel ising;
    encode::EncodingMetadata meta;
    if (kind == "schedule") {
        auto p = parse_problem<SchedulingProblem>(payload);
        throw_on_violations(domain::validate(p, ctx.max_qubits));
        auto [m, md] = encode::maxcut_to_ising(encode::build_constraint_graph(p));
        ising = std::move(m);
        meta = std::move(md);
    } else {
        auto p = parse_problem<KnapsackProblem>(payload);
        throw_on_violations(domain::validate(p, ctx.max_qubits));
        auto [qubo, md] = encode::knapsack_to_qubo(p);
        ising = encode::qubo_to_ising(qubo);
        ising.n = qubo.n;
        meta = std::move(md);
    }
    return {{"ising_model", ising}, {"encoding_metadata", meta}};
}

json circuit_generation_handler(const WorkerContext& ctx, const json& payload) {
    IsingModel ising;
    try {
        ising = require_object(payload, "ising_model").get<IsingModel>();
    } catch (const json::exception& e) {
        throw HandlerError(std::string{"malformed ising_model: "} + e.what());
    }
    if (ising.n > ctx.max_qubits)
        throw HandlerError("qubit cap exceeded: circuit needs " + std::to_string(ising.n) +
                           " qubits, cap is " + std::to_string(ctx.max_qubits));
    const auto cfg = effective_qaoa_config(ctx, payload);
    const auto circuit = qaoa::build_qaoa_circuit(ising, cfg.layers);
    return {{"circuit_qasm", qasm::emit(circuit)}, {"num_qubits", circuit.num_qubits}};
}

json circuit_refinement_handler(const WorkerContext& ctx, const json& payload) {
    const auto cfg = effective_qaoa_config(ctx, payload);
    domain::QuantumCircuit circuit;
    try {
        circuit = qasm::parse(
            require_object(payload, "circuit_qasm").get<std::string>());
    } catch (const qasm::QasmError& e) {
        throw HandlerError(std::string{"circuit_qasm parse failed: "} + e.what());
    }
    if (static_cast<int>(circuit.parameters.size()) != 2 * cfg.layers)
        throw HandlerError("parameter mismatch: circuit declares " +
                           std::to_string(circuit.parameters.size()) +
                           " parameters, expected " + std::to_string(2 * cfg.layers));
    IsingModel ising;
    try {
        ising = require_object(payload, "ising_model").get<IsingModel>();
    } catch (const json::exception& e) {
        throw HandlerError(std::string{"malformed ising_model: "} + e.what());
    }
    if (ising.n != circuit.num_qubits)
        throw HandlerError("ising_model covers " + std::to_string(ising.n) +
                           " qubits but the circuit has " +
                           std::to_string(circuit.num_qubits));

    const auto trace = qaoa::refine(circuit, ising, cfg);

    // Bind the winning parameters as literal angles and flag the circuit
    // final so execution appends measurements.
    domain::ParameterBinding binding = qaoa::bind_parameters(circuit, trace.best_parameters);
    domain::QuantumCircuit bound = circuit;
    bound.parameters.clear();
    for (auto& g : bound.gates) {
        if (g.param.empty()) continue;
        g.angle = g.param_scale * binding.at(g.param);
        g.param.clear();
        g.param_scale = 1.0;
    }
    bound.final_measure = true;

    json best_params = json::array();
    for (double v : trace.best_parameters) best_params.push_back(v);
    return {{"bound_circuit_qasm", qasm::emit(bound)},
            {"best_expectation", trace.best_expectation},
            {"trace_summary",
             {{"evaluations", trace.evaluations.size()},
              {"best_expectation", trace.best_expectation},
              {"best_parameters", best_params}}}};
}

json solution_mapping_handler(const WorkerContext& ctx, const json& payload) {
    (void)ctx;
    const std::string kind = require_kind(payload);
    encode::EncodingMetadata meta;
    try {
        meta = require_object(payload, "encoding_metadata").get<encode::EncodingMetadata>();
    } catch (const json::exception& e) {
        throw HandlerError(std::string{"malformed encoding_metadata: "} + e.what());
    }
    MeasurementCounts counts;
    try {
        counts = require_object(payload, "counts").get<MeasurementCounts>();
    } catch (const json::exception& e) {
        throw HandlerError(std::string{"malformed counts: "} + e.what());
    }
    const auto mode = encode::decode_mode_from_string(
        payload.value("decode_mode", std::string{"best_sampled"}));

    DomainSolution sol;
    try {
        if (kind == "schedule") {
            if (meta.kind != "maxcut-schedule")
                throw HandlerError("kind mismatch: schedule problem with '" + meta.kind +
                                   "' metadata");
            sol = encode::decode_schedule(counts, meta, parse_problem<SchedulingProblem>(payload),
                                          mode);
        } else {
            if (meta.kind != "knapsack-slack")
                throw HandlerError("kind mismatch: knapsack problem with '" + meta.kind +
                                   "' metadata");
            sol = encode::decode_knapsack(counts, meta, parse_problem<KnapsackProblem>(payload),
                                          mode);
        }
    } catch (const std::invalid_argument& e) {
        throw HandlerError(e.what());
    }
    if (payload.contains("trace_summary") && payload.at("trace_summary").is_object())
        sol.diagnostics.trace_length =
            payload.at("trace_summary").value("evaluations", std::int64_t{0});
    return {{"solution", sol}};
}

json classical_strategy_handler(const WorkerContext& ctx, const json& payload) {
    const std::string kind = require_kind(payload);
    DomainSolution sol;
    if (kind == "schedule") {
        auto p = parse_problem<SchedulingProblem>(payload);
        throw_on_violations(domain::validate(p, ctx.max_qubits));
        if (p.num_shifts * p.num_agents > ctx.classical_cap)
            throw HandlerError("cap exceeded: " + std::to_string(p.num_shifts * p.num_agents) +
                               " variables, classical cap is " +
                               std::to_string(ctx.classical_cap));
        const auto graph = encode::build_constraint_graph(p);

        // Exhaustive search over exactly-one-agent-per-shift assignments.
        std::vector<int> choice(static_cast<size_t>(p.num_shifts), 0);
        std::string best_bits;
        int best_cut = -1;
        while (true) {
            std::string bits(static_cast<size_t>(graph.num_vertices), '0');
            for (int s = 0; s < p.num_shifts; ++s)
                bits[static_cast<size_t>(s * p.num_agents + choice[static_cast<size_t>(s)])] =
                    '1';
            const int cut = encode::cut_value(graph, bits);
            if (cut > best_cut) {
                best_cut = cut;
                best_bits = bits;
            }
            int k = 0;
            while (k < p.num_shifts) {
                if (++choice[static_cast<size_t>(k)] < p.num_agents) break;
                choice[static_cast<size_t>(k)] = 0;
                ++k;
            }
            if (k == p.num_shifts) break;
        }
        sol.kind = "schedule";
        for (int s = 1; s <= p.num_shifts; ++s)
            for (int a = 1; a <= p.num_agents; ++a)
                if (best_bits[static_cast<size_t>((s - 1) * p.num_agents + (a - 1))] == '1')
                    sol.schedule.push_back({s, a});
        sol.diagnostics.bitstring = best_bits;
        sol.diagnostics.objective = static_cast<double>(best_cut);
    } else {
        auto p = parse_problem<KnapsackProblem>(payload);
        throw_on_violations(domain::validate(p, ctx.max_qubits));
        const int n = static_cast<int>(p.values.size());
        if (n + domain::slack_bit_count(p.capacity) > ctx.classical_cap)
            throw HandlerError("cap exceeded: " +
                               std::to_string(n + domain::slack_bit_count(p.capacity)) +
                               " variables, classical cap is " +
                               std::to_string(ctx.classical_cap));

        // Exact dynamic program over (items x capacity).
        const auto W = static_cast<size_t>(p.capacity);
        std::vector<std::vector<std::int64_t>> table(
            static_cast<size_t>(n) + 1, std::vector<std::int64_t>(W + 1, 0));
        for (int i = 1; i <= n; ++i) {
            const auto wi = static_cast<size_t>(p.weights[static_cast<size_t>(i - 1)]);
            const auto vi = p.values[static_cast<size_t>(i - 1)];
            for (size_t w = 0; w <= W; ++w) {
                table[i][w] = table[i - 1][w];
                if (wi <= w) table[i][w] = std::max(table[i][w], table[i - 1][w - wi] + vi);
            }
        }
        std::vector<int> items;
        size_t w = W;
        for (int i = n; i >= 1; --i) {
            if (table[i][w] != table[i - 1][w]) {
                items.push_back(i);
                w -= static_cast<size_t>(p.weights[static_cast<size_t>(i - 1)]);
            }
        }
        std::reverse(items.begin(), items.end());
        sol.kind = "knapsack";
        sol.items = items;
        std::string bits(static_cast<size_t>(n), '0');
        for (int i : items) {
            sol.total_value += p.values[static_cast<size_t>(i - 1)];
            sol.total_weight += p.weights[static_cast<size_t>(i - 1)];
            bits[static_cast<size_t>(i - 1)] = '1';
        }
        sol.diagnostics.bitstring = bits;
        sol.diagnostics.objective = static_cast<double>(sol.total_value);
    }
    return {{"solution", sol}};
}

const std::map<std::string, std::string>& agent_directory() {
    static const std::map<std::string, std::string> store = {
        {"a1", "Amara Okafor"}, {"a2", "Ben Keller"},    {"a3", "Carla Mendes"},
        {"a4", "Derya Aksoy"},  {"a5", "Elena Petrova"}, {"a6", "Farid Haddad"},
        {"a7", "Grace Liu"},    {"a8", "Henrik Larsen"},
    };
    return store;
}

const std::map<std::string, std::string>& container_manifest() {
    static const std::map<std::string, std::string> store = {
        {"c1", "Reefer 20ft #0041"},  {"c2", "Dry van 40ft #1207"},
        {"c3", "Open top 20ft #0332"}, {"c4", "Tank 30ft #0518"},
        {"c5", "Flat rack 40ft #0774"}, {"c6", "Dry van 20ft #1431"},
        {"c7", "Reefer 40ft #0093"},  {"c8", "Bulk 20ft #0648"},
    };
    return store;
}

json input_aggregation_handler(const WorkerContext& ctx, const json& payload) {
    const std::string kind = require_kind(payload);
    json out = json::object();
    int num_variables = 0;

    if (kind == "schedule") {
        auto p = parse_problem<SchedulingProblem>(payload);
        throw_on_violations(domain::validate(p, ctx.max_qubits));
        num_variables = p.num_shifts * p.num_agents;
        out["problem"] = p;
        if (payload.contains("agent_ids")) {
            const auto ids = payload.at("agent_ids").get<std::vector<std::string>>();
            if (static_cast<int>(ids.size()) != p.num_agents)
                throw HandlerError("agent_ids lists " + std::to_string(ids.size()) +
                                   " agents, problem has " + std::to_string(p.num_agents));
            json names = json::array();
            for (const auto& id : ids) {
                auto it = agent_directory().find(id);
                if (it == agent_directory().end())
                    throw HandlerError("unknown reference '" + id + "'");
                names.push_back(it->second);
            }
            out["agent_names"] = names;
        }
    } else {
        auto p = parse_problem<KnapsackProblem>(payload);
        throw_on_violations(domain::validate(p, ctx.max_qubits));
        num_variables =
            static_cast<int>(p.values.size()) + domain::slack_bit_count(p.capacity);
        out["problem"] = p;
        if (payload.contains("container_ids")) {
            const auto ids = payload.at("container_ids").get<std::vector<std::string>>();
            if (ids.size() != p.values.size())
                throw HandlerError("container_ids lists " + std::to_string(ids.size()) +
                                   " containers, problem has " +
                                   std::to_string(p.values.size()) + " items");
            json names = json::array();
            for (const auto& id : ids) {
                auto it = container_manifest().find(id);
                if (it == container_manifest().end())
                    throw HandlerError("unknown reference '" + id + "'");
                names.push_back(it->second);
            }
            out["container_names"] = names;
        }
    }

    out["num_variables"] = num_variables;
    out["shots"] = payload.value("shots", ctx.default_shots);
    out["decode_mode"] = payload.value("decode_mode", std::string{"best_sampled"});
    json qcfg;
    to_json(qcfg, effective_qaoa_config(ctx, payload));
    out["qaoa"] = qcfg;
    out["refine_circuit"] = payload.value("refine_circuit", true);
    out["aggregate_output"] = payload.value("aggregate_output", true);
    return out;
}

json output_aggregation_handler(const WorkerContext& ctx, const json& payload) {
    (void)ctx;
    DomainSolution sol;
    try {
        sol = require_object(payload, "solution").get<DomainSolution>();
    } catch (const json::exception& e) {
        throw HandlerError(std::string{"malformed solution: "} + e.what());
    }
    if (sol.status != "ok") return {{"solution", sol}};  // nothing to join

    if (sol.kind == "schedule" && payload.contains("agent_names")) {
        const auto names = payload.at("agent_names").get<std::vector<std::string>>();
        json shifts = json::array();
        for (const auto& a : sol.schedule) {
            if (a.agent < 1 || a.agent > static_cast<int>(names.size()))
                throw HandlerError("unknown reference: agent index " + std::to_string(a.agent));
            shifts.push_back({{"shift", a.shift}, {"agent", names[static_cast<size_t>(a.agent - 1)]}});
        }
        sol.labels = json{{"shifts", shifts}};
    } else if (sol.kind == "knapsack" && payload.contains("container_names")) {
        const auto names = payload.at("container_names").get<std::vector<std::string>>();
        json containers = json::array();
        for (int item : sol.items) {
            if (item < 1 || item > static_cast<int>(names.size()))
                throw HandlerError("unknown reference: item index " + std::to_string(item));
            containers.push_back(names[static_cast<size_t>(item - 1)]);
        }
        sol.labels = json{{"containers", containers}};
    }
    return {{"solution", sol}};
}

std::map<std::string, Handler> build_handler_registry(const WorkerContext& ctx) {
    std::map<std::string, Handler> registry;
    auto add = [&](const std::string& type, json (*fn)(const WorkerContext&, const json&)) {
        registry[type] = [ctx, fn](const json& payload) { return fn(ctx, payload); };
    };
    add("scheduling_qaoa_problem-mapping", problem_mapping_handler);
    add("knapsack_qaoa_problem-mapping", problem_mapping_handler);
    add("scheduling_qaoa_circuit-generation", circuit_generation_handler);
    add("knapsack_qaoa_circuit-generation", circuit_generation_handler);
    add("quantum_device-selection", device_selection_handler);
    add("scheduling_qaoa_circuit-refinement", circuit_refinement_handler);
    add("knapsack_qaoa_circuit-refinement", circuit_refinement_handler);
    add("quantum_circuit-execution", circuit_execution_handler);
    add("scheduling_qaoa_solution-mapping", solution_mapping_handler);
    add("knapsack_qaoa_solution-mapping", solution_mapping_handler);
    add("classical_solver", classical_strategy_handler);
    add("domain_input-aggregation", input_aggregation_handler);
    add("domain_output-aggregation", output_aggregation_handler);
    return registry;
}

}  // namespace qorch::workers
