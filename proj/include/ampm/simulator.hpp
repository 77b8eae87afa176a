#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ampm/analytic.hpp"
#include "ampm/common.hpp"
#include "ampm/schedule.hpp"

namespace ampm {

// Memory guard: 2^24 amplitudes = 256 MB. Callers may override per call.
inline constexpr int kDefaultMaxQubits = 24;

/// A search problem: n query qubits and the marked basis indices.
/// lambda is always the exact rational M/N derived from the counts.
struct SearchInstance {
    int num_qubits = 0;
    std::vector<std::uint64_t> targets;  // sorted, distinct, in [0, 2^n)

    std::uint64_t size() const { return std::uint64_t{1} << num_qubits; }  // N
    std::uint64_t num_targets() const { return targets.size(); }           // M
    double lambda() const {
        return static_cast<double>(num_targets()) / static_cast<double>(size());
    }
};

inline SearchInstance make_instance(int num_qubits, std::vector<std::uint64_t> targets) {
    if (num_qubits < 1 || num_qubits >= 63)
        throw std::invalid_argument("make_instance: qubit count must be in [1, 62]");
    if (targets.empty())
        throw std::invalid_argument("make_instance: target set must be non-empty");
    std::sort(targets.begin(), targets.end());
    if (std::adjacent_find(targets.begin(), targets.end()) != targets.end())
        throw std::invalid_argument("make_instance: duplicate target index");
    std::uint64_t n = std::uint64_t{1} << num_qubits;
    if (targets.back() >= n)
        throw std::invalid_argument("make_instance: target index " +
                                    std::to_string(targets.back()) +
                                    " out of range for " + std::to_string(num_qubits) +
                                    " qubits");
    return SearchInstance{num_qubits, std::move(targets)};
}

/// Dense complex amplitude vector over the computational basis.
struct StateVector {
    std::vector<Complex> amplitudes;

    int num_qubits() const {
        int n = 0;
        while ((std::uint64_t{1} << n) < amplitudes.size()) ++n;
        return n;
    }
    double norm_sq() const {
        double s = 0.0;
        for (const Complex& a : amplitudes) s += std::norm(a);
        return s;
    }
};

namespace detail {

inline void check_dims(const StateVector& state, const SearchInstance& inst,
                       const char* who) {
    if (state.amplitudes.size() != inst.size())
        throw std::invalid_argument(std::string(who) + ": state has " +
                                    std::to_string(state.amplitudes.size()) +
                                    " amplitudes, instance expects " +
                                    std::to_string(inst.size()));
}

// In-place Hadamard butterfly on one qubit: cost 2^n per pass.
inline void hadamard_pass(std::vector<Complex>& amps, int qubit) {
    const std::uint64_t half = std::uint64_t{1} << qubit;
    const std::uint64_t stride = half << 1;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::uint64_t base = 0; base < amps.size(); base += stride) {
        for (std::uint64_t i = 0; i < half; ++i) {
            Complex a = amps[base + i];
            Complex b = amps[base + i + half];
            amps[base + i] = (a + b) * inv_sqrt2;
            amps[base + i + half] = (a - b) * inv_sqrt2;
        }
    }
}

inline void hadamard_all(std::vector<Complex>& amps, int num_qubits) {
    for (int q = 0; q < num_qubits; ++q) hadamard_pass(amps, q);
}

}  // namespace detail

/// |psi> = H^(x)n |0>: every amplitude 1/sqrt(N).
inline StateVector prepare_uniform(const SearchInstance& inst,
                                   int max_qubits = kDefaultMaxQubits) {
    if (inst.num_qubits > max_qubits)
        throw capability_error("prepare_uniform: " + std::to_string(inst.num_qubits) +
                               " qubits exceeds the configured maximum of " +
                               std::to_string(max_qubits));
    StateVector s;
    s.amplitudes.assign(inst.size(),
                        Complex{1.0 / std::sqrt(static_cast<double>(inst.size())), 0.0});
    return s;
}

/// S_f^varphi: multiply the amplitude of every target index by e^{i varphi}.
inline StateVector apply_oracle_phase(StateVector state, const SearchInstance& inst,
                                      double varphi) {
    detail::check_dims(state, inst, "apply_oracle_phase");
    const Complex phase = std::polar(1.0, varphi);
    for (std::uint64_t t : inst.targets) state.amplitudes[t] *= phase;
    return state;
}

/// S_0^phi: multiply the amplitude at index 0 by e^{i phi}.
inline StateVector apply_zero_phase(StateVector state, double phi) {
    if (!state.amplitudes.empty()) state.amplitudes[0] *= std::polar(1.0, phi);
    return state;
}

/// One generalized Grover iteration -H S_0^phi H S_f^varphi, including the
/// leading global minus sign (kept so operator-level tests are exact;
/// probabilities never see it).
inline StateVector apply_generalized_grover(StateVector state, const SearchInstance& inst,
                                            double phi, double varphi) {
    detail::check_dims(state, inst, "apply_generalized_grover");
    state = apply_oracle_phase(std::move(state), inst, varphi);
    detail::hadamard_all(state.amplitudes, inst.num_qubits);
    state = apply_zero_phase(std::move(state), phi);
    detail::hadamard_all(state.amplitudes, inst.num_qubits);
    for (Complex& a : state.amplitudes) a = -a;
    return state;
}

/// Full run: uniform preparation, then G(phi_j, varphi_j) for j = 1..l.
/// The schedule's design lambda may differ from the instance's actual
/// lambda; that mismatch is exactly the fixed-point band experiment.
inline StateVector run_schedule(const SearchInstance& inst, const PhaseSchedule& sched,
                                int max_qubits = kDefaultMaxQubits) {
    StateVector state = prepare_uniform(inst, max_qubits);
    for (int j = 0; j < sched.iterations; ++j)
        state = apply_generalized_grover(std::move(state), inst,
                                         sched.zero_phases[j], sched.oracle_phases[j]);
    return state;
}

/// Total probability of measuring any target index.
inline double target_probability(const StateVector& state, const SearchInstance& inst) {
    detail::check_dims(state, inst, "target_probability");
    double p = 0.0;
    for (std::uint64_t t : inst.targets) p += std::norm(state.amplitudes[t]);
    return p;
}

/// Born-rule probabilities over all basis states.
inline Distribution to_distribution(const StateVector& state) {
    double n2 = state.norm_sq();
    if (std::abs(n2 - 1.0) > 1e-6)
        throw std::invalid_argument("to_distribution: state is not normalized (|psi|^2 = " +
                                    std::to_string(n2) + ")");
    Distribution d;
    d.probs.reserve(state.amplitudes.size());
    for (const Complex& a : state.amplitudes) d.probs.push_back(std::norm(a));
    return d;
}

}  // namespace ampm
