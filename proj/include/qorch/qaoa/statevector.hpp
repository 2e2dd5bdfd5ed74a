#pragma once

#include <complex>
#include <string>

// <resolv.h> (dragged in via socket headers) leaks a `_res` macro that
// mangles Eigen's internal signatures; neutralize it first.
#ifdef _res
#undef _res
#endif
#include <Eigen/Dense>

#include "qorch/domain/types.hpp"

// Dense statevector simulation. Index convention: bit k of an amplitude
// index (LSB = k = 0) is qubit k's basis value; rendered bitstrings put
// qubit 0 leftmost.

namespace qorch::qaoa {

class StateVector {
  public:
    explicit StateVector(int num_qubits);

    int num_qubits() const { return num_qubits_; }
    Eigen::Index dim() const { return amp_.size(); }

    const Eigen::VectorXcd& amplitudes() const { return amp_; }
    Eigen::VectorXcd& amplitudes() { return amp_; }

    double squared_norm() const { return amp_.squaredNorm(); }

    void apply_h(int q);
    void apply_rx(int q, double theta);
    void apply_rz(int q, double theta);
    void apply_cx(int control, int target);

  private:
    int num_qubits_;
    Eigen::VectorXcd amp_;
};

// Bitstring for amplitude index b: character k (leftmost = 0) is qubit k.
std::string index_to_bitstring(std::uint64_t b, int num_qubits);
std::uint64_t bitstring_to_index(const std::string& bits);

// Spin of qubit k in basis state b: bit 1 -> z = -1, bit 0 -> z = +1.
inline int spin_of(std::uint64_t b, int k) { return (b >> k) & 1u ? -1 : +1; }

// Sequentially applies the circuit's gates to |0...0>; throws
// std::invalid_argument on an unbound parameter name.
StateVector simulate(const domain::QuantumCircuit& c, const domain::ParameterBinding& binding);

// <H> of the Ising model under the state; throws on qubit-count mismatch.
double expectation(const StateVector& s, const domain::IsingModel& m);

// shots independent draws from |amplitude|^2, deterministic per seed.
domain::MeasurementCounts sample(const StateVector& s, int shots, std::uint64_t seed);

}  // namespace qorch::qaoa
