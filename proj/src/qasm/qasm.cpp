#include "qorch/qasm/qasm.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <sstream>
#include <vector>

namespace qorch::qasm {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Cursor over a single line with 1-based error positions.
struct LineCursor {
    const std::string& text;
    int line_no;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw QasmError(msg + " at line " + std::to_string(line_no) + ", column " +
                            std::to_string(pos + 1),
                        line_no, static_cast<int>(pos + 1));
    }
    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) { ++pos; return true; }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    void expect_literal(const std::string& lit) {
        skip_ws();
        if (text.compare(pos, lit.size(), lit) != 0) fail("expected '" + lit + "'");
        pos += lit.size();
    }
    std::string word() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        return text.substr(start, pos - start);
    }
    int integer() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) fail("expected integer");
        return std::stoi(text.substr(start, pos - start));
    }
    double real() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) ||
                                     text[pos] == '+' || text[pos] == '-' || text[pos] == '.' ||
                                     text[pos] == 'e' || text[pos] == 'E'))
            ++pos;
        if (pos == start) fail("expected number");
        try {
            size_t used = 0;
            const std::string tok = text.substr(start, pos - start);
            const double v = std::stod(tok, &used);
            if (used != tok.size()) fail("malformed number '" + tok + "'");
            return v;
        } catch (const std::logic_error&) {
            fail("malformed number");
        }
    }
    int qubit_ref(char reg) {
        skip_ws();
        if (pos >= text.size() || text[pos] != reg)
            fail(std::string("expected register '") + reg + "'");
        ++pos;
        expect('[');
        const int idx = integer();
        expect(']');
        return idx;
    }
    void end_statement() {
        expect(';');
        skip_ws();
        if (pos != text.size()) fail("trailing characters after ';'");
    }
};

}  // namespace

std::string emit(const domain::QuantumCircuit& c) {
    std::ostringstream out;
    out << "OPENQASM 2.0;\n";
    out << "include \"qelib1.inc\";\n";
    out << "qreg q[" << c.num_qubits << "];\n";
    out << "creg c[" << c.num_qubits << "];\n";

    struct SidecarEntry { int index; std::string name; double scale; };
    std::vector<SidecarEntry> sidecar;

    int index = 0;
    for (const auto& g : c.gates) {
        if (g.q0 < 0 || g.q0 >= c.num_qubits || (g.q1 >= c.num_qubits))
            throw std::invalid_argument("gate operand out of range");
        switch (g.kind) {
            case domain::GateKind::H:
                out << "h q[" << g.q0 << "];\n";
                break;
            case domain::GateKind::RX:
            case domain::GateKind::RZ: {
                const char* name = g.kind == domain::GateKind::RX ? "rx" : "rz";
                if (g.param.empty()) {
                    out << name << "(" << format_double(g.angle) << ") q[" << g.q0 << "];\n";
                } else {
                    out << name << "(0.0) q[" << g.q0 << "];\n";
                    sidecar.push_back({index, g.param, g.param_scale});
                }
                break;
            }
            case domain::GateKind::CX:
                if (g.q1 < 0 || g.q1 == g.q0)
                    throw std::invalid_argument("cx needs two distinct operands");
                out << "cx q[" << g.q0 << "],q[" << g.q1 << "];\n";
                break;
        }
        ++index;
    }
    if (c.final_measure)
        for (int q = 0; q < c.num_qubits; ++q)
            out << "measure q[" << q << "] -> c[" << q << "];\n";
    if (!c.parameters.empty()) {
        out << "// PARAMS: declare";
        for (const auto& name : c.parameters) out << " " << name;
        out << "\n";
        for (const auto& e : sidecar)
            out << "// PARAMS: bind " << e.index << " " << e.name << " "
                << format_double(e.scale) << "\n";
    }
    return out.str();
}

domain::QuantumCircuit parse(const std::string& text) {
    std::vector<std::string> lines;
    {
        std::string cur;
        for (char ch : text) {
            if (ch == '\n') { lines.push_back(cur); cur.clear(); }
            else cur.push_back(ch);
        }
        if (!cur.empty()) lines.push_back(cur);
    }

    domain::QuantumCircuit circuit;
    int qreg_size = -1, creg_size = -1;
    int header_stage = 0;  // 0: OPENQASM, 1: include, 2: qreg, 3: creg, 4: body
    bool in_measure_block = false;
    int next_measure_qubit = 0;
    struct SidecarEntry { int index; std::string name; double scale; int line; };
    std::vector<SidecarEntry> sidecar;

    for (int ln = 0; ln < static_cast<int>(lines.size()); ++ln) {
        LineCursor cur{lines[static_cast<size_t>(ln)], ln + 1};
        cur.skip_ws();
        if (cur.pos == cur.text.size()) continue;

        if (cur.text.compare(cur.pos, 2, "//") == 0) {
            cur.pos += 2;
            cur.skip_ws();
            if (cur.text.compare(cur.pos, 7, "PARAMS:") == 0) {
                cur.pos += 7;
                cur.skip_ws();
                const std::string verb = cur.word();
                if (verb == "declare") {
                    while (true) {
                        cur.skip_ws();
                        if (cur.pos == cur.text.size()) break;
                        const std::string name = cur.word();
                        if (name.empty()) cur.fail("expected parameter name");
                        if (std::find(circuit.parameters.begin(), circuit.parameters.end(),
                                      name) != circuit.parameters.end())
                            cur.fail("parameter '" + name + "' declared twice");
                        circuit.parameters.push_back(name);
                    }
                } else if (verb == "bind") {
                    const int idx = cur.integer();
                    cur.skip_ws();
                    std::string name = cur.word();
                    if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0])))
                        cur.fail("expected parameter name");
                    const double scale = cur.real();
                    sidecar.push_back({idx, name, scale, ln + 1});
                } else {
                    cur.fail("expected 'declare' or 'bind' in PARAMS block");
                }
            }
            continue;  // other comments are ignored
        }

        if (header_stage == 0) {
            cur.expect_literal("OPENQASM");
            cur.expect_literal("2.0");
            cur.end_statement();
            header_stage = 1;
            continue;
        }
        if (header_stage == 1) {
            cur.expect_literal("include");
            cur.expect_literal("\"qelib1.inc\"");
            cur.end_statement();
            header_stage = 2;
            continue;
        }
        if (header_stage == 2) {
            cur.expect_literal("qreg");
            qreg_size = cur.qubit_ref('q');
            cur.end_statement();
            if (qreg_size < 1) cur.fail("qreg size must be >= 1");
            header_stage = 3;
            continue;
        }
        if (header_stage == 3) {
            cur.expect_literal("creg");
            creg_size = cur.qubit_ref('c');
            cur.end_statement();
            if (creg_size != qreg_size)
                cur.fail("creg size " + std::to_string(creg_size) + " != qreg size " +
                         std::to_string(qreg_size));
            circuit.num_qubits = qreg_size;
            header_stage = 4;
            continue;
        }

        const std::string op = cur.word();
        if (op.empty()) cur.fail("expected statement");

        auto check_qubit = [&](int q) {
            if (q >= qreg_size)
                cur.fail("qubit index " + std::to_string(q) + " out of range (qreg size " +
                         std::to_string(qreg_size) + ")");
        };

        if (op == "measure") {
            const int q = cur.qubit_ref('q');
            check_qubit(q);
            cur.expect_literal("->");
            const int cbit = cur.qubit_ref('c');
            cur.end_statement();
            if (q != next_measure_qubit || cbit != q)
                cur.fail("measure statements must cover qubits in order q[k] -> c[k]");
            in_measure_block = true;
            ++next_measure_qubit;
            continue;
        }
        if (in_measure_block) cur.fail("gate after measure block");

        if (op == "h") {
            const int q = cur.qubit_ref('q');
            cur.end_statement();
            check_qubit(q);
            circuit.gates.push_back({domain::GateKind::H, q});
        } else if (op == "rx" || op == "rz") {
            cur.expect('(');
            const double angle = cur.real();
            cur.expect(')');
            const int q = cur.qubit_ref('q');
            cur.end_statement();
            check_qubit(q);
            circuit.gates.push_back(
                {op == "rx" ? domain::GateKind::RX : domain::GateKind::RZ, q, -1, angle});
        } else if (op == "cx") {
            const int q0 = cur.qubit_ref('q');
            cur.expect(',');
            const int q1 = cur.qubit_ref('q');
            cur.end_statement();
            check_qubit(q0);
            check_qubit(q1);
            if (q0 == q1) cur.fail("cx operands must differ");
            circuit.gates.push_back({domain::GateKind::CX, q0, q1});
        } else {
            throw QasmError("unknown gate '" + op + "' at line " + std::to_string(ln + 1),
                            ln + 1, 1);
        }
    }

    if (header_stage != 4)
        throw QasmError("incomplete document: missing header or register declarations",
                        static_cast<int>(lines.size()), 1);
    if (in_measure_block) {
        if (next_measure_qubit != qreg_size)
            throw QasmError("measure block covers " + std::to_string(next_measure_qubit) +
                                " of " + std::to_string(qreg_size) + " qubits",
                            static_cast<int>(lines.size()), 1);
        circuit.final_measure = true;
    }

    for (const auto& e : sidecar) {
        if (e.index < 0 || e.index >= static_cast<int>(circuit.gates.size()))
            throw QasmError("PARAMS index " + std::to_string(e.index) + " out of range",
                            e.line, 1);
        auto& g = circuit.gates[static_cast<size_t>(e.index)];
        if (g.kind != domain::GateKind::RX && g.kind != domain::GateKind::RZ)
            throw QasmError("PARAMS index " + std::to_string(e.index) +
                                " does not reference a rotation gate",
                            e.line, 1);
        if (!g.param.empty())
            throw QasmError("duplicate PARAMS entry for gate " + std::to_string(e.index),
                            e.line, 1);
        if (std::find(circuit.parameters.begin(), circuit.parameters.end(), e.name) ==
            circuit.parameters.end())
            throw QasmError("parameter '" + e.name + "' bound but not declared", e.line, 1);
        g.param = e.name;
        g.param_scale = e.scale;
        g.angle = 0.0;
    }
    return circuit;
}

}  // namespace qorch::qasm
