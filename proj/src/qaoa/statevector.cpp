#include "qorch/qaoa/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace qorch::qaoa {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > domain::kMaxSimQubits)
        throw std::invalid_argument("statevector supports 1.." +
                                    std::to_string(domain::kMaxSimQubits) + " qubits, got " +
                                    std::to_string(num_qubits));
    amp_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << num_qubits);
    amp_(0) = 1.0;
}

void StateVector::apply_h(int q) {
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Eigen::Index mask = Eigen::Index{1} << q;
    for (Eigen::Index i = 0; i < amp_.size(); ++i) {
        if (i & mask) continue;
        const auto a = amp_(i);
        const auto b = amp_(i | mask);
        amp_(i) = (a + b) * inv_sqrt2;
        amp_(i | mask) = (a - b) * inv_sqrt2;
    }
}

void StateVector::apply_rx(int q, double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const Eigen::Index mask = Eigen::Index{1} << q;
    for (Eigen::Index i = 0; i < amp_.size(); ++i) {
        if (i & mask) continue;
        const auto a = amp_(i);
        const auto b = amp_(i | mask);
        amp_(i) = c * a - kI * s * b;
        amp_(i | mask) = -kI * s * a + c * b;
    }
}

void StateVector::apply_rz(int q, double theta) {
    const std::complex<double> p0 = std::exp(-kI * (theta / 2.0));
    const std::complex<double> p1 = std::exp(kI * (theta / 2.0));
    const Eigen::Index mask = Eigen::Index{1} << q;
    for (Eigen::Index i = 0; i < amp_.size(); ++i)
        amp_(i) *= (i & mask) ? p1 : p0;
}

void StateVector::apply_cx(int control, int target) {
    const Eigen::Index cmask = Eigen::Index{1} << control;
    const Eigen::Index tmask = Eigen::Index{1} << target;
    for (Eigen::Index i = 0; i < amp_.size(); ++i)
        if ((i & cmask) && !(i & tmask)) std::swap(amp_(i), amp_(i | tmask));
}

std::string index_to_bitstring(std::uint64_t b, int num_qubits) {
    std::string s(static_cast<size_t>(num_qubits), '0');
    for (int k = 0; k < num_qubits; ++k)
        if ((b >> k) & 1u) s[static_cast<size_t>(k)] = '1';
    return s;
}

std::uint64_t bitstring_to_index(const std::string& bits) {
    std::uint64_t b = 0;
    for (size_t k = 0; k < bits.size(); ++k)
        if (bits[k] == '1') b |= std::uint64_t{1} << k;
    return b;
}

StateVector simulate(const domain::QuantumCircuit& c, const domain::ParameterBinding& binding) {
    StateVector s(c.num_qubits);
    for (const auto& g : c.gates) {
        double angle = g.angle;
        if (!g.param.empty()) {
            auto it = binding.find(g.param);
            if (it == binding.end())
                throw std::invalid_argument("unbound parameter '" + g.param + "'");
            angle = g.param_scale * it->second;
        }
        switch (g.kind) {
            case domain::GateKind::H: s.apply_h(g.q0); break;
            case domain::GateKind::RX: s.apply_rx(g.q0, angle); break;
            case domain::GateKind::RZ: s.apply_rz(g.q0, angle); break;
            case domain::GateKind::CX: s.apply_cx(g.q0, g.q1); break;
        }
    }
    return s;
}

double expectation(const StateVector& s, const domain::IsingModel& m) {
    if (s.num_qubits() != m.n)
        throw std::invalid_argument("state has " + std::to_string(s.num_qubits()) +
                                    " qubits but model has " + std::to_string(m.n));
    const auto& amp = s.amplitudes();
    double acc = 0.0;
    for (Eigen::Index b = 0; b < amp.size(); ++b) {
        const double p = std::norm(amp(b));
        if (p == 0.0) continue;
        double e = m.offset;
        for (const auto& [i, c] : m.h) e += c * spin_of(static_cast<std::uint64_t>(b), i);
        for (const auto& [uv, c] : m.j)
            e += c * spin_of(static_cast<std::uint64_t>(b), uv.first) *
                 spin_of(static_cast<std::uint64_t>(b), uv.second);
        acc += p * e;
    }
    return acc;
}

domain::MeasurementCounts sample(const StateVector& s, int shots, std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    std::mt19937_64 rng(seed);
    // Uniform doubles straight from the generator's top 53 bits keeps the
    // draw sequence identical across standard libraries.
    std::vector<double> u(static_cast<size_t>(shots));
    for (auto& x : u) x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    std::sort(u.begin(), u.end());

    domain::MeasurementCounts out;
    out.shots = shots;
    const auto& amp = s.amplitudes();
    double cum = 0.0;
    size_t next = 0;
    Eigen::Index last_nonzero = 0;
    for (Eigen::Index b = 0; b < amp.size() && next < u.size(); ++b) {
        const double p = std::norm(amp(b));
        if (p > 0.0) last_nonzero = b;
        cum += p;
        std::int64_t hits = 0;
        while (next < u.size() && u[next] < cum) { ++hits; ++next; }
        if (hits > 0)
            out.counts[index_to_bitstring(static_cast<std::uint64_t>(b), s.num_qubits())] += hits;
    }
    // cum can fall a few ulps short of 1; leftover draws land on the last
    // state that carried probability.
    if (next < u.size()) {
        const auto last = index_to_bitstring(static_cast<std::uint64_t>(last_nonzero),
                                             s.num_qubits());
        out.counts[last] += static_cast<std::int64_t>(u.size() - next);
    }
    return out;
}

}  // namespace qorch::qaoa
