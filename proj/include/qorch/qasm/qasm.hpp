#pragma once

#include <stdexcept>
#include <string>

#include "qorch/domain/types.hpp"

// OpenQASM 2.0 subset used to move circuits between services: h/rx/rz/cx and
// trailing measures, one `qreg q[n]`/`creg c[n]` pair. Free parameters are
// printed as a literal 0.0 angle plus a trailing sidecar block that any plain
// 2.0 reader can ignore:
//   // PARAMS: declare <name> <name> ...
//   // PARAMS: bind <gate-index> <name> <scale>   (bound angle = scale * value)
// Emission is deterministic; parse(emit(c)) reconstructs c exactly.

namespace qorch::qasm {

struct QasmError : std::runtime_error {
    QasmError(const std::string& msg, int line, int column)
        : std::runtime_error(msg), line(line), column(column) {}
    int line;
    int column;
};

std::string emit(const domain::QuantumCircuit& c);

domain::QuantumCircuit parse(const std::string& text);

}  // namespace qorch::qasm
