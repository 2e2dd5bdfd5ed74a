#pragma once

#include <string>
#include <vector>

#include "qorch/domain/types.hpp"

// Domain <-> math translations: scheduling -> max-cut graph -> Ising,
// knapsack -> QUBO (slack bits) -> Ising, and the reverse mapping from
// measurement histograms back to domain solutions.

namespace qorch::encode {

using domain::ConstraintGraph;
using domain::DomainSolution;
using domain::IsingModel;
using domain::KnapsackProblem;
using domain::MeasurementCounts;
using domain::QuboModel;
using domain::SchedulingProblem;

// Everything solution mapping needs besides the domain problem itself.
struct EncodingMetadata {
    std::string kind;                          // "maxcut-schedule" | "knapsack-slack"
    ConstraintGraph graph;                     // maxcut-schedule
    int num_items = 0;                         // knapsack-slack
    int num_slack = 0;
    std::vector<std::int64_t> slack_coefficients;
    std::int64_t penalty = 0;

    bool operator==(const EncodingMetadata&) const = default;
};

void to_json(domain::json& j, const EncodingMetadata& m);
void from_json(const domain::json& j, EncodingMetadata& m);

enum class DecodeMode { ArgmaxCount, BestSampled };

DecodeMode decode_mode_from_string(const std::string& s);
std::string to_string(DecodeMode m);

// E1: one edge between every pair of same-shift vertices.
// E2: one edge between (s,a) and (s+1,a) per agent. Flags suppress a family.
ConstraintGraph build_constraint_graph(const SchedulingProblem& p);

// h = 0, J_uv = +1/2 per edge, offset = -|E|/2, so energy(z) = -cut(z).
std::pair<IsingModel, EncodingMetadata> maxcut_to_ising(const ConstraintGraph& g);

// minimize -sum v_i x_i + A*(sum w_i x_i + sum 2^k s_k - W)^2,
// m = ceil(log2(W+1)) slack bits, A = sum(v) + 1. Exact integer expansion.
std::pair<QuboModel, EncodingMetadata> knapsack_to_qubo(const KnapsackProblem& p);

// Exact substitution x_i = (1 - z_i)/2; pointwise energy-preserving.
IsingModel qubo_to_ising(const QuboModel& q);

// Number of edges of g cut by the given bitstring (char k = vertex k, '1' = included).
int cut_value(const ConstraintGraph& g, const std::string& bits);

DomainSolution decode_schedule(const MeasurementCounts& counts, const EncodingMetadata& meta,
                               const SchedulingProblem& p, DecodeMode mode);

DomainSolution decode_knapsack(const MeasurementCounts& counts, const EncodingMetadata& meta,
                               const KnapsackProblem& p, DecodeMode mode);

}  // namespace qorch::encode
