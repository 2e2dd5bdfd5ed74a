#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qorch/domain/types.hpp"
#include "qorch/qaoa/statevector.hpp"

namespace qorch::qaoa {

struct QaoaConfig {
    int layers = 2;
    std::string optimizer = "nelder-mead";
    int max_evals = 400;       // per restart
    double tolerance = 1e-4;
    int restarts = 3;
    std::uint64_t rng_seed = 0;

    bool operator==(const QaoaConfig&) const = default;
};

void to_json(domain::json& j, const QaoaConfig& c);
void from_json(const domain::json& j, QaoaConfig& c);

struct RefinementTrace {
    // One entry per objective evaluation, in evaluation order.
    std::vector<std::pair<std::vector<double>, double>> evaluations;
    std::vector<double> best_parameters;
    double best_expectation = 0.0;
};

// Standard ansatz: H on every qubit, then per layer l the cost phases
// (CX-RZ(2*gamma_l*J)-CX per coupling, RZ(2*gamma_l*h) per field) followed by
// the mixer RX(2*beta_l) on every qubit. Parameters gamma_l/beta_l appear in
// first-use order.
domain::QuantumCircuit build_qaoa_circuit(const domain::IsingModel& m, int layers);

// Binding for the circuit's declared parameter order.
domain::ParameterBinding bind_parameters(const domain::QuantumCircuit& c,
                                         const std::vector<double>& theta);

// Derivative-free Nelder-Mead minimization of expectation(simulate(c, theta), m).
// Restart 0 starts from all parameters = 0.1; the remaining restarts draw
// gamma from [0, pi) and beta from [0, pi/2) using cfg.rng_seed. The trace
// accumulates every evaluation across restarts (<= restarts * max_evals).
RefinementTrace refine(const domain::QuantumCircuit& c, const domain::IsingModel& m,
                       const QaoaConfig& cfg);

// Plain Nelder-Mead on an arbitrary objective; appends each evaluation to
// trace_sink if given. Returns (best point, best value).
std::pair<std::vector<double>, double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& start, int max_evals, double tolerance,
    RefinementTrace* trace_sink = nullptr);

}  // namespace qorch::qaoa
