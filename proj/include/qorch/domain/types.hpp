#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

// Shared vocabulary of problem, circuit and result types. Everything here is
// an immutable value after construction and crosses service boundaries as
// JSON process variables.

namespace qorch::domain {

using json = nlohmann::json;

// Hard ceiling of the embedded statevector simulator.
inline constexpr int kMaxSimQubits = 24;

struct SchedulingProblem {
    int num_shifts = 0;
    int num_agents = 0;
    bool constraint_e1 = true;  // exactly one agent per shift
    bool constraint_e2 = true;  // no consecutive shifts for the same agent

    bool operator==(const SchedulingProblem&) const = default;
};

struct KnapsackProblem {
    std::vector<std::int64_t> values;
    std::vector<std::int64_t> weights;
    std::int64_t capacity = 0;

    bool operator==(const KnapsackProblem&) const = default;
};

// Undirected graph over shift-agent assignment vertices.
// Vertex index convention: v = (shift-1)*num_agents + (agent-1), both 1-based.
struct ConstraintGraph {
    int num_vertices = 0;
    std::set<std::pair<int, int>> edges;                 // normalized u < v
    std::vector<std::pair<int, int>> vertex_labels;      // (shift, agent), 1-based

    bool operator==(const ConstraintGraph&) const = default;
};

// Minimization-sense quadratic form over binary variables.
struct QuboModel {
    int n = 0;
    std::map<int, double> linear;
    std::map<std::pair<int, int>, double> quadratic;     // keys normalized u < v
    double offset = 0.0;

    double value(const std::vector<int>& x) const;

    bool operator==(const QuboModel&) const = default;
};

// Spin form: energy(z) = offset + sum h_i z_i + sum J_uv z_u z_v, z in {-1,+1}.
struct IsingModel {
    int n = 0;
    std::map<int, double> h;
    std::map<std::pair<int, int>, double> j;             // keys normalized u < v
    double offset = 0.0;

    double energy(const std::vector<int>& z) const;

    bool operator==(const IsingModel&) const = default;
};

enum class GateKind { H, RX, RZ, CX };

std::string to_string(GateKind k);
GateKind gate_kind_from_string(const std::string& s);

// One gate. RX/RZ angles are either a literal (param empty) or a scaled
// reference to a named free parameter: effective angle = param_scale * value.
struct Gate {
    GateKind kind = GateKind::H;
    int q0 = 0;
    int q1 = -1;                 // CX target; -1 for single-qubit gates
    double angle = 0.0;          // literal angle, ignored when param is set
    std::string param;           // free-parameter name, empty for literal
    double param_scale = 1.0;

    bool operator==(const Gate&) const = default;
};

struct QuantumCircuit {
    int num_qubits = 0;
    std::vector<Gate> gates;
    std::vector<std::string> parameters;   // declaration order = first use
    bool final_measure = false;            // emit measure statements for all qubits

    bool operator==(const QuantumCircuit&) const = default;
};

using ParameterBinding = std::map<std::string, double>;

// Histogram of sampled bitstrings. Bit convention everywhere in this system:
// character k of a bitstring (leftmost = position 0) is qubit k.
struct MeasurementCounts {
    int shots = 0;
    std::map<std::string, std::int64_t> counts;

    bool operator==(const MeasurementCounts&) const = default;
};

struct SolutionDiagnostics {
    std::string bitstring;
    std::int64_t count = 0;
    double objective = 0.0;
    std::int64_t trace_length = 0;

    bool operator==(const SolutionDiagnostics&) const = default;
};

struct ShiftAssignment {
    int shift = 0;   // 1-based
    int agent = 0;   // 1-based

    bool operator==(const ShiftAssignment&) const = default;
};

// Decoded domain-level answer. status "ok" carries a feasible solution;
// "infeasible" flags a decoded bitstring violating the domain constraints;
// "degraded" means no feasible sample existed (empty selection returned).
struct DomainSolution {
    std::string kind;                       // "schedule" | "knapsack"
    std::string status = "ok";              // "ok" | "infeasible" | "degraded"
    std::vector<ShiftAssignment> schedule;  // kind == schedule
    std::vector<int> items;                 // kind == knapsack, 1-based indices
    std::int64_t total_value = 0;
    std::int64_t total_weight = 0;
    SolutionDiagnostics diagnostics;
    json labels;                            // optional display names, set by output aggregation

    bool operator==(const DomainSolution&) const = default;
};

struct DeviceDescriptor {
    std::string id;
    std::string kind = "statevector-simulator";
    int max_qubits = 0;
    bool available = true;
    double cost_per_shot = 0.0;
    std::optional<std::int64_t> seed;

    bool operator==(const DeviceDescriptor&) const = default;
};

// --- validation -----------------------------------------------------------

// Number of slack bits for a knapsack capacity: m = ceil(log2(W+1)).
int slack_bit_count(std::int64_t capacity);

// Returns human-readable invariant violations; empty means valid.
std::vector<std::string> validate(const SchedulingProblem& p, int max_qubits = kMaxSimQubits);
std::vector<std::string> validate(const KnapsackProblem& p, int max_qubits = kMaxSimQubits);

std::vector<std::string> validate(const MeasurementCounts& c, int num_qubits);

// --- JSON wire forms ------------------------------------------------------

void to_json(json& j, const SchedulingProblem& p);
void from_json(const json& j, SchedulingProblem& p);
void to_json(json& j, const KnapsackProblem& p);
void from_json(const json& j, KnapsackProblem& p);
void to_json(json& j, const ConstraintGraph& g);
void from_json(const json& j, ConstraintGraph& g);
void to_json(json& j, const QuboModel& q);
void from_json(const json& j, QuboModel& q);
void to_json(json& j, const IsingModel& m);
void from_json(const json& j, IsingModel& m);
void to_json(json& j, const Gate& g);
void from_json(const json& j, Gate& g);
void to_json(json& j, const QuantumCircuit& c);
void from_json(const json& j, QuantumCircuit& c);
void to_json(json& j, const MeasurementCounts& c);
void from_json(const json& j, MeasurementCounts& c);
void to_json(json& j, const SolutionDiagnostics& d);
void from_json(const json& j, SolutionDiagnostics& d);
void to_json(json& j, const ShiftAssignment& a);
void from_json(const json& j, ShiftAssignment& a);
void to_json(json& j, const DomainSolution& s);
void from_json(const json& j, DomainSolution& s);
void to_json(json& j, const DeviceDescriptor& d);
void from_json(const json& j, DeviceDescriptor& d);

}  // namespace qorch::domain
