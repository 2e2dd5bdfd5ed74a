#include "qorch/domain/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace qorch::domain {

double QuboModel::value(const std::vector<int>& x) const {
    double v = offset;
    for (const auto& [i, c] : linear) v += c * x[static_cast<size_t>(i)];
    for (const auto& [uv, c] : quadratic)
        v += c * x[static_cast<size_t>(uv.first)] * x[static_cast<size_t>(uv.second)];
    return v;
}

double IsingModel::energy(const std::vector<int>& z) const {
    double e = offset;
    for (const auto& [i, c] : h) e += c * z[static_cast<size_t>(i)];
    for (const auto& [uv, c] : j)
        e += c * z[static_cast<size_t>(uv.first)] * z[static_cast<size_t>(uv.second)];
    return e;
}

std::string to_string(GateKind k) {
    switch (k) {
        case GateKind::H: return "h";
        case GateKind::RX: return "rx";
        case GateKind::RZ: return "rz";
        case GateKind::CX: return "cx";
    }
    throw std::logic_error("unreachable gate kind");
}

GateKind gate_kind_from_string(const std::string& s) {
    if (s == "h") return GateKind::H;
    if (s == "rx") return GateKind::RX;
    if (s == "rz") return GateKind::RZ;
    if (s == "cx") return GateKind::CX;
    throw std::invalid_argument("unknown gate kind '" + s + "'");
}

int slack_bit_count(std::int64_t capacity) {
    if (capacity <= 0) return 0;
    int m = 0;
    // smallest m with 2^m >= capacity + 1
    while ((std::int64_t{1} << m) < capacity + 1) ++m;
    return m;
}

std::vector<std::string> validate(const SchedulingProblem& p, int max_qubits) {
    std::vector<std::string> errs;
    if (p.num_shifts < 1) errs.push_back("num_shifts must be >= 1");
    if (p.num_agents < 1) errs.push_back("num_agents must be >= 1");
    if (p.constraint_e1 && p.num_agents < 2)
        errs.push_back("constraint E1 requires >= 2 agents");
    if (p.num_shifts >= 1 && p.num_agents >= 1) {
        const std::int64_t need =
            static_cast<std::int64_t>(p.num_shifts) * p.num_agents;
        if (need > max_qubits)
            errs.push_back("qubit budget exceeded (needs " + std::to_string(need) +
                           ", max " + std::to_string(max_qubits) + ")");
    }
    return errs;
}

std::vector<std::string> validate(const KnapsackProblem& p, int max_qubits) {
    std::vector<std::string> errs;
    if (p.values.empty()) errs.push_back("empty item list");
    if (p.values.size() != p.weights.size())
        errs.push_back("values and weights must have equal length");
    for (auto v : p.values)
        if (v <= 0) { errs.push_back("item values must be positive"); break; }
    for (auto w : p.weights)
        if (w <= 0) { errs.push_back("item weights must be positive"); break; }
    if (p.capacity <= 0) errs.push_back("nonpositive capacity");
    if (!p.values.empty() && p.values.size() == p.weights.size() && p.capacity > 0) {
        const std::int64_t need =
            static_cast<std::int64_t>(p.values.size()) + slack_bit_count(p.capacity);
        if (need > max_qubits)
            errs.push_back("qubit budget exceeded (needs " + std::to_string(need) +
                           ", max " + std::to_string(max_qubits) + ")");
    }
    return errs;
}

std::vector<std::string> validate(const MeasurementCounts& c, int num_qubits) {
    std::vector<std::string> errs;
    if (c.shots < 1) errs.push_back("shots must be >= 1");
    std::int64_t total = 0;
    for (const auto& [bits, n] : c.counts) {
        if (static_cast<int>(bits.size()) != num_qubits) {
            errs.push_back("bitstring '" + bits + "' length != " + std::to_string(num_qubits));
            break;
        }
        if (n < 0) { errs.push_back("negative count"); break; }
        total += n;
    }
    if (errs.empty() && total != c.shots)
        errs.push_back("counts sum " + std::to_string(total) + " != shots " +
                       std::to_string(c.shots));
    return errs;
}

// --- JSON -------------------------------------------------------------------

void to_json(json& j, const SchedulingProblem& p) {
    j = {{"num_shifts", p.num_shifts},
         {"num_agents", p.num_agents},
         {"constraint_e1", p.constraint_e1},
         {"constraint_e2", p.constraint_e2}};
}

void from_json(const json& j, SchedulingProblem& p) {
    p.num_shifts = j.at("num_shifts").get<int>();
    p.num_agents = j.at("num_agents").get<int>();
    p.constraint_e1 = j.value("constraint_e1", true);
    p.constraint_e2 = j.value("constraint_e2", true);
}

void to_json(json& j, const KnapsackProblem& p) {
    j = {{"values", p.values}, {"weights", p.weights}, {"capacity", p.capacity}};
}

void from_json(const json& j, KnapsackProblem& p) {
    p.values = j.at("values").get<std::vector<std::int64_t>>();
    p.weights = j.at("weights").get<std::vector<std::int64_t>>();
    p.capacity = j.at("capacity").get<std::int64_t>();
}

void to_json(json& j, const ConstraintGraph& g) {
    json edges = json::array();
    for (const auto& [u, v] : g.edges) edges.push_back({u, v});
    json labels = json::array();
    for (const auto& [s, a] : g.vertex_labels) labels.push_back({s, a});
    j = {{"num_vertices", g.num_vertices}, {"edges", edges}, {"vertex_labels", labels}};
}

void from_json(const json& j, ConstraintGraph& g) {
    g.num_vertices = j.at("num_vertices").get<int>();
    g.edges.clear();
    for (const auto& e : j.at("edges"))
        g.edges.emplace(e.at(0).get<int>(), e.at(1).get<int>());
    g.vertex_labels.clear();
    for (const auto& l : j.at("vertex_labels"))
        g.vertex_labels.emplace_back(l.at(0).get<int>(), l.at(1).get<int>());
}

void to_json(json& j, const QuboModel& q) {
    json lin = json::array();
    for (const auto& [i, c] : q.linear) lin.push_back({i, c});
    json quad = json::array();
    for (const auto& [uv, c] : q.quadratic) quad.push_back({uv.first, uv.second, c});
    j = {{"n", q.n}, {"linear", lin}, {"quadratic", quad}, {"offset", q.offset}};
}

void from_json(const json& j, QuboModel& q) {
    q.n = j.at("n").get<int>();
    q.linear.clear();
    for (const auto& t : j.at("linear"))
        q.linear[t.at(0).get<int>()] = t.at(1).get<double>();
    q.quadratic.clear();
    for (const auto& t : j.at("quadratic"))
        q.quadratic[{t.at(0).get<int>(), t.at(1).get<int>()}] = t.at(2).get<double>();
    q.offset = j.at("offset").get<double>();
}

void to_json(json& j, const IsingModel& m) {
    json h = json::array();
    for (const auto& [i, c] : m.h) h.push_back({i, c});
    json jj = json::array();
    for (const auto& [uv, c] : m.j) jj.push_back({uv.first, uv.second, c});
    j = {{"n", m.n}, {"h", h}, {"j", jj}, {"offset", m.offset}};
}

void from_json(const json& j, IsingModel& m) {
    m.n = j.at("n").get<int>();
    m.h.clear();
    for (const auto& t : j.at("h")) m.h[t.at(0).get<int>()] = t.at(1).get<double>();
    m.j.clear();
    for (const auto& t : j.at("j"))
        m.j[{t.at(0).get<int>(), t.at(1).get<int>()}] = t.at(2).get<double>();
    m.offset = j.at("offset").get<double>();
}

void to_json(json& j, const Gate& g) {
    j = {{"kind", to_string(g.kind)}};
    json qubits = json::array();
    qubits.push_back(g.q0);
    if (g.q1 >= 0) qubits.push_back(g.q1);
    j["qubits"] = qubits;
    if (g.kind == GateKind::RX || g.kind == GateKind::RZ) {
        if (g.param.empty()) {
            j["angle"] = g.angle;
        } else {
            j["param"] = g.param;
            j["scale"] = g.param_scale;
        }
    }
}

void from_json(const json& j, Gate& g) {
    g = Gate{};
    g.kind = gate_kind_from_string(j.at("kind").get<std::string>());
    const auto& qubits = j.at("qubits");
    g.q0 = qubits.at(0).get<int>();
    g.q1 = qubits.size() > 1 ? qubits.at(1).get<int>() : -1;
    if (j.contains("param")) {
        g.param = j.at("param").get<std::string>();
        g.param_scale = j.value("scale", 1.0);
    } else if (j.contains("angle")) {
        g.angle = j.at("angle").get<double>();
    }
}

void to_json(json& j, const QuantumCircuit& c) {
    j = {{"num_qubits", c.num_qubits},
         {"gates", c.gates},
         {"parameters", c.parameters},
         {"final_measure", c.final_measure}};
}

void from_json(const json& j, QuantumCircuit& c) {
    c.num_qubits = j.at("num_qubits").get<int>();
    c.gates = j.at("gates").get<std::vector<Gate>>();
    c.parameters = j.at("parameters").get<std::vector<std::string>>();
    c.final_measure = j.value("final_measure", false);
}

void to_json(json& j, const MeasurementCounts& c) {
    j = {{"shots", c.shots}, {"counts", c.counts}};
}

void from_json(const json& j, MeasurementCounts& c) {
    c.shots = j.at("shots").get<int>();
    c.counts = j.at("counts").get<std::map<std::string, std::int64_t>>();
}

void to_json(json& j, const SolutionDiagnostics& d) {
    j = {{"bitstring", d.bitstring},
         {"count", d.count},
         {"objective", d.objective},
         {"trace_length", d.trace_length}};
}

void from_json(const json& j, SolutionDiagnostics& d) {
    d.bitstring = j.value("bitstring", "");
    d.count = j.value("count", std::int64_t{0});
    d.objective = j.value("objective", 0.0);
    d.trace_length = j.value("trace_length", std::int64_t{0});
}

void to_json(json& j, const ShiftAssignment& a) {
    j = {{"shift", a.shift}, {"agent", a.agent}};
}

void from_json(const json& j, ShiftAssignment& a) {
    a.shift = j.at("shift").get<int>();
    a.agent = j.at("agent").get<int>();
}

void to_json(json& j, const DomainSolution& s) {
    j = {{"kind", s.kind}, {"status", s.status}, {"diagnostics", s.diagnostics}};
    if (s.kind == "schedule") {
        j["schedule"] = s.schedule;
    } else if (s.kind == "knapsack") {
        j["items"] = s.items;
        j["total_value"] = s.total_value;
        j["total_weight"] = s.total_weight;
    }
    if (!s.labels.is_null()) j["labels"] = s.labels;
}

void from_json(const json& j, DomainSolution& s) {
    s = DomainSolution{};
    s.kind = j.at("kind").get<std::string>();
    s.status = j.value("status", "ok");
    if (j.contains("schedule"))
        s.schedule = j.at("schedule").get<std::vector<ShiftAssignment>>();
    if (j.contains("items")) s.items = j.at("items").get<std::vector<int>>();
    s.total_value = j.value("total_value", std::int64_t{0});
    s.total_weight = j.value("total_weight", std::int64_t{0});
    if (j.contains("diagnostics")) s.diagnostics = j.at("diagnostics").get<SolutionDiagnostics>();
    if (j.contains("labels")) s.labels = j.at("labels");
}

void to_json(json& j, const DeviceDescriptor& d) {
    j = {{"id", d.id},
         {"kind", d.kind},
         {"max_qubits", d.max_qubits},
         {"available", d.available},
         {"cost_per_shot", d.cost_per_shot}};
    if (d.seed) j["seed"] = *d.seed;
}

void from_json(const json& j, DeviceDescriptor& d) {
    d.id = j.at("id").get<std::string>();
    d.kind = j.value("kind", std::string{"statevector-simulator"});
    d.max_qubits = j.at("max_qubits").get<int>();
    d.available = j.value("available", true);
    d.cost_per_shot = j.value("cost_per_shot", 0.0);
    if (j.contains("seed") && !j.at("seed").is_null())
        d.seed = j.at("seed").get<std::int64_t>();
    else
        d.seed.reset();
}

}  // namespace qorch::domain
