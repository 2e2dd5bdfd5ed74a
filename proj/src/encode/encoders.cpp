#include "qorch/encode/encoders.hpp"

#include <algorithm>
#include <stdexcept>

namespace qorch::encode {

void to_json(domain::json& j, const EncodingMetadata& m) {
    j = {{"kind", m.kind}};
    if (m.kind == "maxcut-schedule") {
        j["graph"] = m.graph;
    } else {
        j["num_items"] = m.num_items;
        j["num_slack"] = m.num_slack;
        j["slack_coefficients"] = m.slack_coefficients;
        j["penalty"] = m.penalty;
    }
}

void from_json(const domain::json& j, EncodingMetadata& m) {
    m = EncodingMetadata{};
    m.kind = j.at("kind").get<std::string>();
    if (m.kind == "maxcut-schedule") {
        m.graph = j.at("graph").get<ConstraintGraph>();
    } else if (m.kind == "knapsack-slack") {
        m.num_items = j.at("num_items").get<int>();
        m.num_slack = j.at("num_slack").get<int>();
        m.slack_coefficients = j.at("slack_coefficients").get<std::vector<std::int64_t>>();
        m.penalty = j.at("penalty").get<std::int64_t>();
    } else {
        throw std::invalid_argument("unknown encoding metadata kind '" + m.kind + "'");
    }
}

DecodeMode decode_mode_from_string(const std::string& s) {
    if (s == "argmax_count") return DecodeMode::ArgmaxCount;
    if (s == "best_sampled") return DecodeMode::BestSampled;
    throw std::invalid_argument("unknown decode mode '" + s + "'");
}

std::string to_string(DecodeMode m) {
    return m == DecodeMode::ArgmaxCount ? "argmax_count" : "best_sampled";
}

ConstraintGraph build_constraint_graph(const SchedulingProblem& p) {
    ConstraintGraph g;
    g.num_vertices = p.num_shifts * p.num_agents;
    g.vertex_labels.reserve(static_cast<size_t>(g.num_vertices));
    for (int s = 1; s <= p.num_shifts; ++s)
        for (int a = 1; a <= p.num_agents; ++a)
            g.vertex_labels.emplace_back(s, a);

    auto vertex = [&](int s, int a) { return (s - 1) * p.num_agents + (a - 1); };

    if (p.constraint_e1) {
        for (int s = 1; s <= p.num_shifts; ++s)
            for (int a = 1; a <= p.num_agents; ++a)
                for (int b = a + 1; b <= p.num_agents; ++b)
                    g.edges.emplace(vertex(s, a), vertex(s, b));
    }
    if (p.constraint_e2) {
        for (int s = 1; s < p.num_shifts; ++s)
            for (int a = 1; a <= p.num_agents; ++a)
                g.edges.emplace(vertex(s, a), vertex(s + 1, a));
    }
    return g;
}

std::pair<IsingModel, EncodingMetadata> maxcut_to_ising(const ConstraintGraph& g) {
    IsingModel m;
    m.n = g.num_vertices;
    for (const auto& e : g.edges) m.j[e] = 0.5;
    m.offset = -0.5 * static_cast<double>(g.edges.size());

    EncodingMetadata meta;
    meta.kind = "maxcut-schedule";
    meta.graph = g;
    return {m, meta};
}

std::pair<QuboModel, EncodingMetadata> knapsack_to_qubo(const KnapsackProblem& p) {
    const int n = static_cast<int>(p.values.size());
    const int m = domain::slack_bit_count(p.capacity);
    const std::int64_t W = p.capacity;

    std::int64_t value_sum = 0;
    for (auto v : p.values) value_sum += v;
    const std::int64_t A = value_sum + 1;

    // Coefficient of binary variable i inside the capacity expression.
    std::vector<std::int64_t> coeff(static_cast<size_t>(n + m));
    for (int i = 0; i < n; ++i) coeff[static_cast<size_t>(i)] = p.weights[static_cast<size_t>(i)];
    std::vector<std::int64_t> slack_coeffs;
    for (int k = 0; k < m; ++k) {
        const std::int64_t c = std::int64_t{1} << k;
        coeff[static_cast<size_t>(n + k)] = c;
        slack_coeffs.push_back(c);
    }

    QuboModel q;
    q.n = n + m;
    // A*(sum a_j y_j - W)^2 with y^2 = y, plus the -v_i item rewards.
    for (int jv = 0; jv < q.n; ++jv) {
        const std::int64_t a = coeff[static_cast<size_t>(jv)];
        double lin = static_cast<double>(A) * static_cast<double>(a * a - 2 * W * a);
        if (jv < n) lin -= static_cast<double>(p.values[static_cast<size_t>(jv)]);
        if (lin != 0.0) q.linear[jv] = lin;
    }
    for (int u = 0; u < q.n; ++u)
        for (int v = u + 1; v < q.n; ++v) {
            const double c = 2.0 * static_cast<double>(A) *
                             static_cast<double>(coeff[static_cast<size_t>(u)]) *
                             static_cast<double>(coeff[static_cast<size_t>(v)]);
            if (c != 0.0) q.quadratic[{u, v}] = c;
        }
    q.offset = static_cast<double>(A) * static_cast<double>(W) * static_cast<double>(W);

    EncodingMetadata meta;
    meta.kind = "knapsack-slack";
    meta.num_items = n;
    meta.num_slack = m;
    meta.slack_coefficients = std::move(slack_coeffs);
    meta.penalty = A;
    return {q, meta};
}

IsingModel qubo_to_ising(const QuboModel& q) {
    IsingModel m;
    m.n = q.n;
    m.offset = q.offset;
    std::map<int, double> h;
    for (const auto& [i, a] : q.linear) {
        h[i] += -a / 2.0;
        m.offset += a / 2.0;
    }
    for (const auto& [uv, b] : q.quadratic) {
        m.j[uv] += b / 4.0;
        h[uv.first] += -b / 4.0;
        h[uv.second] += -b / 4.0;
        m.offset += b / 4.0;
    }
    for (const auto& [i, c] : h)
        if (c != 0.0) m.h[i] = c;
    std::erase_if(m.j, [](const auto& kv) { return kv.second == 0.0; });
    return m;
}

int cut_value(const ConstraintGraph& g, const std::string& bits) {
    int cut = 0;
    for (const auto& [u, v] : g.edges)
        if (bits[static_cast<size_t>(u)] != bits[static_cast<size_t>(v)]) ++cut;
    return cut;
}

namespace {

void check_counts(const MeasurementCounts& counts, int expected_len) {
    if (counts.counts.empty()) throw std::invalid_argument("empty counts map");
    for (const auto& [bits, n] : counts.counts) {
        (void)n;
        if (static_cast<int>(bits.size()) != expected_len)
            throw std::invalid_argument("bitstring length " + std::to_string(bits.size()) +
                                        " does not match expected " + std::to_string(expected_len));
    }
}

// Highest count; ties resolved toward the lexicographically smallest bitstring.
std::pair<std::string, std::int64_t> argmax_count(const MeasurementCounts& counts) {
    std::string best;
    std::int64_t best_count = -1;
    for (const auto& [bits, n] : counts.counts) {
        if (n > best_count || (n == best_count && bits < best)) {
            best = bits;
            best_count = n;
        }
    }
    return {best, best_count};
}

}  // namespace

DomainSolution decode_schedule(const MeasurementCounts& counts, const EncodingMetadata& meta,
                               const SchedulingProblem& p, DecodeMode mode) {
    if (meta.kind != "maxcut-schedule")
        throw std::invalid_argument("kind mismatch: expected maxcut-schedule metadata");
    check_counts(counts, meta.graph.num_vertices);

    std::string chosen;
    std::int64_t chosen_count = 0;
    if (mode == DecodeMode::ArgmaxCount) {
        std::tie(chosen, chosen_count) = argmax_count(counts);
    } else {
        int best_cut = -1;
        for (const auto& [bits, n] : counts.counts) {
            const int c = cut_value(meta.graph, bits);
            if (c > best_cut || (c == best_cut && n > chosen_count) ||
                (c == best_cut && n == chosen_count && bits < chosen)) {
                best_cut = c;
                chosen = bits;
                chosen_count = n;
            }
        }
    }

    DomainSolution sol;
    sol.kind = "schedule";
    sol.diagnostics.bitstring = chosen;
    sol.diagnostics.count = chosen_count;
    sol.diagnostics.objective = static_cast<double>(cut_value(meta.graph, chosen));

    // Bit 1 includes vertex v's (shift, agent) pair; a feasible schedule has
    // exactly one agent per shift.
    std::vector<std::vector<int>> per_shift(static_cast<size_t>(p.num_shifts));
    for (int v = 0; v < meta.graph.num_vertices; ++v) {
        if (chosen[static_cast<size_t>(v)] == '1') {
            const auto& [shift, agent] = meta.graph.vertex_labels[static_cast<size_t>(v)];
            per_shift[static_cast<size_t>(shift - 1)].push_back(agent);
        }
    }
    bool feasible = true;
    for (const auto& agents : per_shift)
        if (agents.size() != 1) { feasible = false; break; }

    if (!feasible) {
        sol.status = "infeasible";
        return sol;
    }
    for (int s = 1; s <= p.num_shifts; ++s)
        sol.schedule.push_back({s, per_shift[static_cast<size_t>(s - 1)].front()});
    return sol;
}

DomainSolution decode_knapsack(const MeasurementCounts& counts, const EncodingMetadata& meta,
                               const KnapsackProblem& p, DecodeMode mode) {
    if (meta.kind != "knapsack-slack")
        throw std::invalid_argument("kind mismatch: expected knapsack-slack metadata");
    const int n = meta.num_items;
    check_counts(counts, n + meta.num_slack);

    auto selection_of = [&](const std::string& item_bits) {
        std::vector<int> items;
        std::int64_t value = 0, weight = 0;
        for (int i = 0; i < n; ++i) {
            if (item_bits[static_cast<size_t>(i)] == '1') {
                items.push_back(i + 1);  // 1-based in the reported solution
                value += p.values[static_cast<size_t>(i)];
                weight += p.weights[static_cast<size_t>(i)];
            }
        }
        return std::tuple{items, value, weight};
    };

    DomainSolution sol;
    sol.kind = "knapsack";

    if (mode == DecodeMode::ArgmaxCount) {
        auto [chosen, count] = argmax_count(counts);
        const std::string item_bits = chosen.substr(0, static_cast<size_t>(n));
        auto [items, value, weight] = selection_of(item_bits);
        sol.diagnostics.bitstring = chosen;
        sol.diagnostics.count = count;
        sol.diagnostics.objective = static_cast<double>(value);
        if (weight > p.capacity) {
            sol.status = "infeasible";  // selection withheld, see diagnostics
            return sol;
        }
        sol.items = items;
        sol.total_value = value;
        sol.total_weight = weight;
        return sol;
    }

    // best_sampled: slack fills collapse onto their item substring; counts
    // aggregate across them.
    std::map<std::string, std::int64_t> by_items;
    for (const auto& [bits, cnt] : counts.counts)
        by_items[bits.substr(0, static_cast<size_t>(n))] += cnt;

    std::string best;
    std::int64_t best_value = -1, best_count = 0;
    for (const auto& [item_bits, cnt] : by_items) {
        auto [items, value, weight] = selection_of(item_bits);
        (void)items;
        if (weight > p.capacity) continue;
        if (value > best_value || (value == best_value && cnt > best_count) ||
            (value == best_value && cnt == best_count && item_bits < best)) {
            best = item_bits;
            best_value = value;
            best_count = cnt;
        }
    }
    if (best_value < 0) {
        sol.status = "degraded";  // nothing sampled fits the capacity
        return sol;
    }
    auto [items, value, weight] = selection_of(best);
    sol.items = items;
    sol.total_value = value;
    sol.total_weight = weight;
    sol.diagnostics.bitstring = best;
    sol.diagnostics.count = best_count;
    sol.diagnostics.objective = static_cast<double>(value);
    return sol;
}

}  // namespace qorch::encode
