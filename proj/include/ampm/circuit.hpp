#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ampm/common.hpp"
#include "ampm/schedule.hpp"
#include "ampm/simulator.hpp"

namespace ampm {

inline constexpr int kMaxSynthesisQubits = 6;   // oracle synthesis scope
inline constexpr int kMaxGateSimQubits = 12;    // gate-level simulation bound

enum class GateKind { H, X, U1, CX, MCX, MCU1 };

/// Symbolic gate. Operand order is controls first, target last; H/X/U1
/// take a single operand. angle is meaningful for U1/MCU1 only.
struct Gate {
    GateKind kind;
    std::vector<int> qubits;
    double angle = 0.0;

    int num_controls() const { return static_cast<int>(qubits.size()) - 1; }
    int target() const { return qubits.back(); }
};

inline Gate gate_h(int q) { return {GateKind::H, {q}, 0.0}; }
inline Gate gate_x(int q) { return {GateKind::X, {q}, 0.0}; }
inline Gate gate_u1(int q, double angle) { return {GateKind::U1, {q}, angle}; }
inline Gate gate_cx(int control, int target) { return {GateKind::CX, {control, target}, 0.0}; }
inline Gate gate_mcx(std::vector<int> controls, int target) {
    controls.push_back(target);
    return {GateKind::MCX, std::move(controls), 0.0};
}
inline Gate gate_mcu1(std::vector<int> qubits, double angle) {
    return {GateKind::MCU1, std::move(qubits), angle};
}

/// Ordered gate list over a query register (qubits 0..n_query-1) and an
/// optional oracle ancilla (qubit n_query). Every circuit built here
/// uncomputes the ancilla back to |0>.
struct GateCircuit {
    int num_query = 0;
    int num_ancilla = 0;  // 0 or 1
    std::vector<Gate> gates;

    int total_qubits() const { return num_query + num_ancilla; }
    int ancilla_index() const { return num_query; }
};

namespace detail {

inline void check_synthesis_scope(const SearchInstance& inst, const char* who) {
    if (inst.num_qubits > kMaxSynthesisQubits)
        throw capability_error(std::string(who) + ": synthesis is limited to " +
                               std::to_string(kMaxSynthesisQubits) + " query qubits, got " +
                               std::to_string(inst.num_qubits));
}

inline void check_gate(const Gate& g, int total_qubits) {
    switch (g.kind) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::U1:
        if (g.qubits.size() != 1)
            throw std::invalid_argument("single-qubit gate takes exactly one operand");
        break;
    case GateKind::CX:
        if (g.qubits.size() != 2)
            throw std::invalid_argument("cx takes exactly two operands");
        break;
    case GateKind::MCX:
    case GateKind::MCU1:
        if (g.qubits.empty())
            throw std::invalid_argument("gate has no operands");
        break;
    }
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
        if (g.qubits[i] < 0 || g.qubits[i] >= total_qubits)
            throw std::invalid_argument("gate operand " + std::to_string(g.qubits[i]) +
                                        " out of range");
        for (std::size_t k = i + 1; k < g.qubits.size(); ++k)
            if (g.qubits[i] == g.qubits[k])
                throw std::invalid_argument("gate operands must be distinct");
    }
    if (!std::isfinite(g.angle))
        throw std::invalid_argument("gate angle must be finite");
}

}  // namespace detail

/// Oracle U_f |x>|y> = |x>|y ^ f(x)>: per target, a multi-controlled X onto
/// the ancilla, conjugated by X on every query qubit whose bit is 0 in that
/// target index.
inline GateCircuit build_oracle(const SearchInstance& inst) {
    detail::check_synthesis_scope(inst, "build_oracle");
    GateCircuit c;
    c.num_query = inst.num_qubits;
    c.num_ancilla = 1;
    const int anc = c.ancilla_index();
    std::vector<int> all_query(inst.num_qubits);
    for (int q = 0; q < inst.num_qubits; ++q) all_query[q] = q;
    for (std::uint64_t t : inst.targets) {
        std::vector<int> zero_bits;
        for (int q = 0; q < inst.num_qubits; ++q)
            if (((t >> q) & 1u) == 0) zero_bits.push_back(q);
        for (int q : zero_bits) c.gates.push_back(gate_x(q));
        if (inst.num_qubits == 1)
            c.gates.push_back(gate_cx(0, anc));
        else
            c.gates.push_back(gate_mcx(all_query, anc));
        for (int q : zero_bits) c.gates.push_back(gate_x(q));
    }
    return c;
}

/// One generalized Grover iteration G(phi, varphi) on the query register,
/// up to a global phase:
///   S_f^varphi by phase kickback (oracle, U1(varphi) on the ancilla,
///   oracle again to uncompute), then H on all query qubits, then S_0^phi,
///   then H on all query qubits.
/// S_0^phi is a single U1(-phi) on the query qubit when n_query = 1 (global
/// phase e^{i phi}), and the X-conjugated multi-controlled U1(phi) over the
/// query register otherwise (exact).
inline GateCircuit build_iteration(const SearchInstance& inst, double phi, double varphi) {
    detail::check_synthesis_scope(inst, "build_iteration");
    GateCircuit oracle = build_oracle(inst);
    GateCircuit c;
    c.num_query = inst.num_qubits;
    c.num_ancilla = 1;

    c.gates = oracle.gates;
    c.gates.push_back(gate_u1(c.ancilla_index(), varphi));
    c.gates.insert(c.gates.end(), oracle.gates.begin(), oracle.gates.end());

    for (int q = 0; q < c.num_query; ++q) c.gates.push_back(gate_h(q));
    if (c.num_query == 1) {
        c.gates.push_back(gate_u1(0, -phi));
    } else {
        for (int q = 0; q < c.num_query; ++q) c.gates.push_back(gate_x(q));
        std::vector<int> all_query(c.num_query);
        for (int q = 0; q < c.num_query; ++q) all_query[q] = q;
        c.gates.push_back(gate_mcu1(all_query, phi));
        for (int q = 0; q < c.num_query; ++q) c.gates.push_back(gate_x(q));
    }
    for (int q = 0; q < c.num_query; ++q) c.gates.push_back(gate_h(q));
    return c;
}

/// Complete search circuit: uniform preparation followed by the schedule's
/// iterations in order.
inline GateCircuit build_full(const SearchInstance& inst, const PhaseSchedule& sched) {
    detail::check_synthesis_scope(inst, "build_full");
    GateCircuit c;
    c.num_query = inst.num_qubits;
    c.num_ancilla = 1;
    for (int q = 0; q < c.num_query; ++q) c.gates.push_back(gate_h(q));
    for (int j = 0; j < sched.iterations; ++j) {
        GateCircuit it = build_iteration(inst, sched.zero_phases[j], sched.oracle_phases[j]);
        c.gates.insert(c.gates.end(), it.gates.begin(), it.gates.end());
    }
    return c;
}

/// Exact statevector over query + ancilla after applying all gates to the
/// given basis state. This is a generic gate-by-gate engine, deliberately
/// separate from the operator-level simulator it cross-validates.
inline StateVector simulate_gates(const GateCircuit& circuit, std::uint64_t input_basis_index) {
    const int n = circuit.total_qubits();
    if (n < 1)
        throw std::invalid_argument("simulate_gates: circuit has no qubits");
    if (n > kMaxGateSimQubits)
        throw capability_error("simulate_gates: " + std::to_string(n) +
                               " qubits exceeds the bound of " +
                               std::to_string(kMaxGateSimQubits));
    const std::uint64_t dim = std::uint64_t{1} << n;
    if (input_basis_index >= dim)
        throw std::invalid_argument("simulate_gates: input basis index out of range");

    StateVector state;
    state.amplitudes.assign(dim, Complex{0.0, 0.0});
    state.amplitudes[input_basis_index] = 1.0;
    std::vector<Complex>& amps = state.amplitudes;

    for (const Gate& g : circuit.gates) {
        detail::check_gate(g, n);
        std::uint64_t control_mask = 0;
        for (std::size_t i = 0; i + 1 < g.qubits.size(); ++i)
            control_mask |= std::uint64_t{1} << g.qubits[i];
        const std::uint64_t target_mask = std::uint64_t{1} << g.target();

        switch (g.kind) {
        case GateKind::H: {
            const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
            for (std::uint64_t i = 0; i < dim; ++i) {
                if (i & target_mask) continue;
                Complex a = amps[i], b = amps[i | target_mask];
                amps[i] = (a + b) * inv_sqrt2;
                amps[i | target_mask] = (a - b) * inv_sqrt2;
            }
            break;
        }
        case GateKind::X:
        case GateKind::CX:
        case GateKind::MCX:
            for (std::uint64_t i = 0; i < dim; ++i) {
                if ((i & control_mask) != control_mask) continue;
                if (i & target_mask) continue;
                std::swap(amps[i], amps[i | target_mask]);
            }
            break;
        case GateKind::U1:
        case GateKind::MCU1: {
            // MCU1 is symmetric in its operands: phase on the all-ones
            // subspace of controls and target alike.
            const std::uint64_t full = control_mask | target_mask;
            const Complex phase = std::polar(1.0, g.angle);
            for (std::uint64_t i = 0; i < dim; ++i)
                if ((i & full) == full) amps[i] *= phase;
            break;
        }
        }
    }
    return state;
}

/// Probabilities over the query register, ancilla traced out.
inline Distribution query_marginal(const StateVector& state, int num_query) {
    const std::uint64_t query_dim = std::uint64_t{1} << num_query;
    if (state.amplitudes.size() < query_dim || state.amplitudes.size() % query_dim != 0)
        throw std::invalid_argument("query_marginal: state size incompatible with query register");
    Distribution d;
    d.probs.assign(query_dim, 0.0);
    for (std::uint64_t i = 0; i < state.amplitudes.size(); ++i)
        d.probs[i & (query_dim - 1)] += std::norm(state.amplitudes[i]);
    return d;
}

/// Probability that the ancilla reads |0>; 1 for every circuit built here.
inline double ancilla_zero_probability(const StateVector& state, const GateCircuit& circuit) {
    if (circuit.num_ancilla == 0) return 1.0;
    const std::uint64_t anc_mask = std::uint64_t{1} << circuit.ancilla_index();
    double p = 0.0;
    for (std::uint64_t i = 0; i < state.amplitudes.size(); ++i)
        if ((i & anc_mask) == 0) p += std::norm(state.amplitudes[i]);
    return p;
}

}  // namespace ampm
