#include "qorch/qaoa/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace qorch::qaoa {

void to_json(domain::json& j, const QaoaConfig& c) {
    j = {{"layers", c.layers},       {"optimizer", c.optimizer},
         {"max_evals", c.max_evals}, {"tolerance", c.tolerance},
         {"restarts", c.restarts},   {"rng_seed", c.rng_seed}};
}

void from_json(const domain::json& j, QaoaConfig& c) {
    QaoaConfig defaults;
    c.layers = j.value("layers", defaults.layers);
    c.optimizer = j.value("optimizer", defaults.optimizer);
    c.max_evals = j.value("max_evals", defaults.max_evals);
    c.tolerance = j.value("tolerance", defaults.tolerance);
    c.restarts = j.value("restarts", defaults.restarts);
    c.rng_seed = j.value("rng_seed", defaults.rng_seed);
    if (c.layers < 1) throw std::invalid_argument("layers must be >= 1");
    if (c.max_evals < 1) throw std::invalid_argument("max_evals must be >= 1");
    if (c.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    if (c.optimizer != "nelder-mead")
        throw std::invalid_argument("unknown optimizer '" + c.optimizer + "'");
}

domain::QuantumCircuit build_qaoa_circuit(const domain::IsingModel& m, int layers) {
    if (m.n < 1) throw std::invalid_argument("model needs at least one qubit");
    if (layers < 1) throw std::invalid_argument("layers must be >= 1");

    domain::QuantumCircuit c;
    c.num_qubits = m.n;
    for (int q = 0; q < m.n; ++q) c.gates.push_back({domain::GateKind::H, q});

    for (int l = 1; l <= layers; ++l) {
        const std::string gamma = "gamma_" + std::to_string(l);
        const std::string beta = "beta_" + std::to_string(l);
        c.parameters.push_back(gamma);
        c.parameters.push_back(beta);
        for (const auto& [uv, coupling] : m.j) {
            if (coupling == 0.0) continue;
            c.gates.push_back({domain::GateKind::CX, uv.first, uv.second});
            c.gates.push_back(
                {domain::GateKind::RZ, uv.second, -1, 0.0, gamma, 2.0 * coupling});
            c.gates.push_back({domain::GateKind::CX, uv.first, uv.second});
        }
        for (const auto& [i, field] : m.h) {
            if (field == 0.0) continue;
            c.gates.push_back({domain::GateKind::RZ, i, -1, 0.0, gamma, 2.0 * field});
        }
        for (int q = 0; q < m.n; ++q)
            c.gates.push_back({domain::GateKind::RX, q, -1, 0.0, beta, 2.0});
    }
    return c;
}

domain::ParameterBinding bind_parameters(const domain::QuantumCircuit& c,
                                         const std::vector<double>& theta) {
    if (theta.size() != c.parameters.size())
        throw std::invalid_argument("binding size " + std::to_string(theta.size()) +
                                    " != parameter count " + std::to_string(c.parameters.size()));
    domain::ParameterBinding b;
    for (size_t i = 0; i < theta.size(); ++i) b[c.parameters[i]] = theta[i];
    return b;
}

std::pair<std::vector<double>, double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& start, int max_evals, double tolerance,
    RefinementTrace* trace_sink) {
    const size_t dim = start.size();
    int evals = 0;
    std::vector<double> best_x = start;
    double best_f = std::numeric_limits<double>::infinity();

    auto eval = [&](const std::vector<double>& x) {
        const double v = f(x);
        ++evals;
        if (trace_sink) trace_sink->evaluations.emplace_back(x, v);
        if (v < best_f) { best_f = v; best_x = x; }
        return v;
    };

    // Initial simplex: the start point plus one vertex per coordinate.
    constexpr double kStep = 0.25;
    std::vector<std::vector<double>> x(dim + 1, start);
    std::vector<double> fx(dim + 1);
    fx[0] = eval(x[0]);
    for (size_t i = 0; i < dim && evals < max_evals; ++i) {
        x[i + 1][i] += kStep;
        fx[i + 1] = eval(x[i + 1]);
    }
    if (evals < static_cast<int>(dim) + 1) return {best_x, best_f};

    constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    std::vector<size_t> order(dim + 1);

    while (evals < max_evals) {
        std::iota(order.begin(), order.end(), size_t{0});
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return fx[a] < fx[b]; });
        {
            std::vector<std::vector<double>> x2(dim + 1);
            std::vector<double> fx2(dim + 1);
            for (size_t k = 0; k <= dim; ++k) { x2[k] = x[order[k]]; fx2[k] = fx[order[k]]; }
            x.swap(x2);
            fx.swap(fx2);
        }
        if (fx[dim] - fx[0] < tolerance) break;

        std::vector<double> centroid(dim, 0.0);
        for (size_t k = 0; k < dim; ++k)
            for (size_t i = 0; i < dim; ++i) centroid[i] += x[k][i] / static_cast<double>(dim);

        auto blend = [&](double t, const std::vector<double>& p) {
            std::vector<double> r(dim);
            for (size_t i = 0; i < dim; ++i) r[i] = centroid[i] + t * (p[i] - centroid[i]);
            return r;
        };

        const auto reflected = blend(-alpha, x[dim]);
        const double fr = eval(reflected);
        if (evals >= max_evals) break;

        if (fr < fx[0]) {
            const auto expanded = blend(-gamma, x[dim]);
            const double fe = eval(expanded);
            if (fe < fr) { x[dim] = expanded; fx[dim] = fe; }
            else         { x[dim] = reflected; fx[dim] = fr; }
        } else if (fr < fx[dim - 1]) {
            x[dim] = reflected;
            fx[dim] = fr;
        } else {
            const auto contracted = blend(fr < fx[dim] ? -rho : rho, x[dim]);
            const double fc = eval(contracted);
            if (evals >= max_evals) break;
            const double against = std::min(fr, fx[dim]);
            if (fc < against) {
                x[dim] = contracted;
                fx[dim] = fc;
            } else {
                // Shrink toward the best vertex.
                for (size_t k = 1; k <= dim && evals < max_evals; ++k) {
                    for (size_t i = 0; i < dim; ++i)
                        x[k][i] = x[0][i] + sigma * (x[k][i] - x[0][i]);
                    fx[k] = eval(x[k]);
                }
            }
        }
    }
    return {best_x, best_f};
}

RefinementTrace refine(const domain::QuantumCircuit& c, const domain::IsingModel& m,
                       const QaoaConfig& cfg) {
    const size_t dim = c.parameters.size();
    if (dim == 0) throw std::invalid_argument("circuit has no free parameters");

    auto objective = [&](const std::vector<double>& theta) {
        return expectation(simulate(c, bind_parameters(c, theta)), m);
    };

    // All restart points are drawn up front so a larger evaluation budget
    // never changes where a restart begins.
    std::vector<std::vector<double>> starts;
    starts.emplace_back(dim, 0.1);
    std::mt19937_64 rng(cfg.rng_seed);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const double pi = std::acos(-1.0);
    for (int r = 1; r < cfg.restarts; ++r) {
        std::vector<double> p(dim);
        for (size_t i = 0; i < dim; ++i) {
            const bool is_beta = c.parameters[i].rfind("beta", 0) == 0;
            p[i] = unit() * (is_beta ? pi / 2.0 : pi);
        }
        starts.push_back(std::move(p));
    }

    RefinementTrace trace;
    trace.best_expectation = std::numeric_limits<double>::infinity();
    for (const auto& start : starts) {
        auto [px, pf] = nelder_mead(objective, start, cfg.max_evals, cfg.tolerance, &trace);
        if (pf < trace.best_expectation) {
            trace.best_expectation = pf;
            trace.best_parameters = px;
        }
    }
    return trace;
}

}  // namespace qorch::qaoa
