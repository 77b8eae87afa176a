#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ampm/circuit.hpp"
#include "ampm/common.hpp"

namespace ampm {
namespace qasm {

/// Format an angle for QASM output: a pi-multiple like `pi/2` or `-3*pi/4`
/// when the angle is within 1e-12 of a rational multiple of pi with
/// denominator <= 16, otherwise a 15-significant-digit decimal.
inline std::string format_angle(double angle) {
    for (long den = 1; den <= 16; ++den) {
        double scaled = angle * den / kPi;
        long num = std::lround(scaled);
        if (std::abs(angle - static_cast<double>(num) * kPi / den) > 1e-12) continue;
        if (num == 0) return "0";
        long g = std::gcd(std::labs(num), den);
        num /= g;
        long d = den / g;
        std::string s = (num < 0) ? "-" : "";
        long a = std::labs(num);
        if (a == 1)
            s += "pi";
        else
            s += std::to_string(a) + "*pi";
        if (d > 1) s += "/" + std::to_string(d);
        return s;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", angle);
    return buf;
}

namespace detail {

inline std::string operand(const GateCircuit& c, int qubit) {
    if (c.num_ancilla > 0 && qubit == c.ancilla_index()) return "a[0]";
    return "q[" + std::to_string(qubit) + "]";
}

inline void emit_cu1(std::string& out, const GateCircuit& c, int control, int target,
                     double angle) {
    out += "cu1(" + format_angle(angle) + ") " + operand(c, control) + "," +
           operand(c, target) + ";\n";
}

}  // namespace detail

/// Emit OpenQASM 2.0. Multi-controlled gates are lowered to the qelib1
/// set {h, x, u1, cx, ccx, cu1}: a 2-control X maps to ccx and a 2-control
/// U1 to the standard cu1/cx five-gate network; anything wider is
/// rejected (decomposition networks are out of scope).
inline std::string to_qasm(const GateCircuit& c) {
    std::string out;
    out += "OPENQASM 2.0;\n";
    out += "include \"qelib1.inc\";\n";
    out += "qreg q[" + std::to_string(c.num_query) + "];\n";
    if (c.num_ancilla > 0) out += "qreg a[" + std::to_string(c.num_ancilla) + "];\n";
    out += "creg c[" + std::to_string(c.num_query) + "];\n";

    for (const Gate& g : c.gates) {
        switch (g.kind) {
        case GateKind::H:
            out += "h " + detail::operand(c, g.target()) + ";\n";
            break;
        case GateKind::X:
            out += "x " + detail::operand(c, g.target()) + ";\n";
            break;
        case GateKind::U1:
            out += "u1(" + format_angle(g.angle) + ") " + detail::operand(c, g.target()) +
                   ";\n";
            break;
        case GateKind::CX:
            out += "cx " + detail::operand(c, g.qubits[0]) + "," +
                   detail::operand(c, g.qubits[1]) + ";\n";
            break;
        case GateKind::MCX:
            if (g.num_controls() == 0) {
                out += "x " + detail::operand(c, g.target()) + ";\n";
            } else if (g.num_controls() == 1) {
                out += "cx " + detail::operand(c, g.qubits[0]) + "," +
                       detail::operand(c, g.target()) + ";\n";
            } else if (g.num_controls() == 2) {
                out += "ccx " + detail::operand(c, g.qubits[0]) + "," +
                       detail::operand(c, g.qubits[1]) + "," +
                       detail::operand(c, g.target()) + ";\n";
            } else {
                throw capability_error("to_qasm: MCX with " +
                                       std::to_string(g.num_controls()) +
                                       " controls is not exportable (max 2)");
            }
            break;
        case GateKind::MCU1:
            if (g.num_controls() == 0) {
                out += "u1(" + format_angle(g.angle) + ") " +
                       detail::operand(c, g.target()) + ";\n";
            } else if (g.num_controls() == 1) {
                detail::emit_cu1(out, c, g.qubits[0], g.target(), g.angle);
            } else if (g.num_controls() == 2) {
                const int a = g.qubits[0], b = g.qubits[1], t = g.target();
                detail::emit_cu1(out, c, b, t, g.angle / 2.0);
                out += "cx " + detail::operand(c, a) + "," + detail::operand(c, b) + ";\n";
                detail::emit_cu1(out, c, b, t, -g.angle / 2.0);
                out += "cx " + detail::operand(c, a) + "," + detail::operand(c, b) + ";\n";
                detail::emit_cu1(out, c, a, t, g.angle / 2.0);
            } else {
                throw capability_error("to_qasm: MCU1 with " +
                                       std::to_string(g.num_controls()) +
                                       " controls is not exportable (max 2)");
            }
            break;
        }
    }
    for (int q = 0; q < c.num_query; ++q)
        out += "measure q[" + std::to_string(q) + "] -> c[" + std::to_string(q) + "];\n";
    return out;
}

namespace detail {

inline std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

/// Parse an emitted angle expression: optional sign, `pi` or a decimal,
/// optional `*pi`, optional `/<number>`.
inline double parse_angle(const std::string& text) {
    std::string s = strip(text);
    if (s.empty()) throw std::invalid_argument("qasm: empty angle expression");
    double sign = 1.0;
    std::size_t i = 0;
    if (s[i] == '-') { sign = -1.0; ++i; }
    else if (s[i] == '+') { ++i; }

    double value = 0.0;
    if (s.compare(i, 2, "pi") == 0) {
        value = kPi;
        i += 2;
    } else {
        const char* begin = s.c_str() + i;
        char* end = nullptr;
        value = std::strtod(begin, &end);
        if (end == begin) throw std::invalid_argument("qasm: bad angle '" + text + "'");
        i += static_cast<std::size_t>(end - begin);
        if (i + 2 < s.size() && s[i] == '*' && s.compare(i + 1, 2, "pi") == 0) {
            value *= kPi;
            i += 3;
        }
    }
    if (i < s.size() && s[i] == '/') {
        const char* begin = s.c_str() + i + 1;
        char* end = nullptr;
        double div = std::strtod(begin, &end);
        if (end == begin || div == 0.0)
            throw std::invalid_argument("qasm: bad angle divisor in '" + text + "'");
        value /= div;
        i = s.size();
    }
    if (i != s.size()) throw std::invalid_argument("qasm: trailing junk in angle '" + text + "'");
    return sign * value;
}

struct RegisterTable {
    std::string query_name;
    std::string ancilla_name;
    int num_query = -1;
    int num_ancilla = 0;

    int resolve(const std::string& ref) const {
        std::size_t lb = ref.find('[');
        std::size_t rb = ref.find(']');
        if (lb == std::string::npos || rb == std::string::npos || rb < lb)
            throw std::invalid_argument("qasm: bad qubit reference '" + ref + "'");
        std::string name = strip(ref.substr(0, lb));
        int idx = std::stoi(ref.substr(lb + 1, rb - lb - 1));
        if (name == query_name) {
            if (idx < 0 || idx >= num_query)
                throw std::invalid_argument("qasm: qubit index out of range in '" + ref + "'");
            return idx;
        }
        if (!ancilla_name.empty() && name == ancilla_name) {
            if (idx != 0)
                throw std::invalid_argument("qasm: ancilla index out of range in '" + ref + "'");
            return num_query;
        }
        throw std::invalid_argument("qasm: unknown register '" + name + "'");
    }
};

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(strip(s.substr(start)));
            return parts;
        }
        parts.push_back(strip(s.substr(start, pos - start)));
        start = pos + 1;
    }
}

}  // namespace detail

/// Restricted OpenQASM 2.0 reader covering exactly the emitted subset:
/// header, one query qreg, an optional one-qubit ancilla qreg, one creg,
/// gates h/x/u1/cx/ccx/cu1, and trailing measure statements (ignored for
/// statevector replay).
inline GateCircuit parse_qasm(const std::string& text) {
    detail::RegisterTable regs;
    GateCircuit circuit;
    bool saw_version = false;
    int qregs_seen = 0;

    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string line = detail::strip(
            text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos));
        pos = (eol == std::string::npos) ? text.size() : eol + 1;

        std::size_t comment = line.find("//");
        if (comment != std::string::npos) line = detail::strip(line.substr(0, comment));
        if (line.empty()) continue;
        if (line.back() != ';')
            throw std::invalid_argument("qasm: missing ';' in line '" + line + "'");
        line = detail::strip(line.substr(0, line.size() - 1));

        if (!saw_version) {
            if (line != "OPENQASM 2.0")
                throw std::invalid_argument("qasm: expected OPENQASM 2.0 header");
            saw_version = true;
            continue;
        }
        if (line.rfind("include", 0) == 0) continue;
        if (line.rfind("qreg", 0) == 0 || line.rfind("creg", 0) == 0) {
            std::size_t lb = line.find('[');
            std::size_t rb = line.find(']');
            if (lb == std::string::npos || rb == std::string::npos)
                throw std::invalid_argument("qasm: bad register declaration '" + line + "'");
            std::string name = detail::strip(line.substr(4, lb - 4));
            int size = std::stoi(line.substr(lb + 1, rb - lb - 1));
            if (line.rfind("creg", 0) == 0) continue;
            if (qregs_seen == 0) {
                regs.query_name = name;
                regs.num_query = size;
            } else if (qregs_seen == 1) {
                if (size != 1)
                    throw std::invalid_argument("qasm: ancilla register must have size 1");
                regs.ancilla_name = name;
                regs.num_ancilla = 1;
            } else {
                throw std::invalid_argument("qasm: at most two quantum registers supported");
            }
            ++qregs_seen;
            continue;
        }
        if (line.rfind("measure", 0) == 0) continue;
        if (regs.num_query < 0)
            throw std::invalid_argument("qasm: gate before any qreg declaration");

        // gate line: name[(angle)] operand[,operand...]
        std::string name, angle_text, operand_text;
        std::size_t paren = line.find('(');
        std::size_t space = line.find(' ');
        if (paren != std::string::npos && (space == std::string::npos || paren < space)) {
            std::size_t close = line.find(')', paren);
            if (close == std::string::npos)
                throw std::invalid_argument("qasm: unbalanced '(' in '" + line + "'");
            name = detail::strip(line.substr(0, paren));
            angle_text = line.substr(paren + 1, close - paren - 1);
            operand_text = detail::strip(line.substr(close + 1));
        } else {
            if (space == std::string::npos)
                throw std::invalid_argument("qasm: malformed line '" + line + "'");
            name = detail::strip(line.substr(0, space));
            operand_text = detail::strip(line.substr(space + 1));
        }
        std::vector<int> ops;
        for (const std::string& ref : detail::split(operand_text, ','))
            ops.push_back(regs.resolve(ref));

        if (name == "h" && ops.size() == 1)
            circuit.gates.push_back(gate_h(ops[0]));
        else if (name == "x" && ops.size() == 1)
            circuit.gates.push_back(gate_x(ops[0]));
        else if (name == "u1" && ops.size() == 1)
            circuit.gates.push_back(gate_u1(ops[0], detail::parse_angle(angle_text)));
        else if (name == "cx" && ops.size() == 2)
            circuit.gates.push_back(gate_cx(ops[0], ops[1]));
        else if (name == "ccx" && ops.size() == 3)
            circuit.gates.push_back(gate_mcx({ops[0], ops[1]}, ops[2]));
        else if (name == "cu1" && ops.size() == 2)
            circuit.gates.push_back(gate_mcu1({ops[0], ops[1]}, detail::parse_angle(angle_text)));
        else
            throw std::invalid_argument("qasm: unsupported statement '" + line + "'");
    }
    if (!saw_version) throw std::invalid_argument("qasm: empty input");
    if (regs.num_query < 0) throw std::invalid_argument("qasm: no quantum register declared");
    circuit.num_query = regs.num_query;
    circuit.num_ancilla = regs.num_ancilla;
    return circuit;
}

}  // namespace qasm
}  // namespace ampm
