#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ampm/common.hpp"
#include "ampm/schedule.hpp"

namespace ampm {

/// Probability vector over basis-state indices; entries sum to 1.
struct Distribution {
    std::vector<double> probs;
};

/// Success probability sampled over actual target fractions for a fixed
/// schedule.
struct SuccessCurve {
    PhaseSchedule schedule;
    std::vector<std::pair<double, double>> samples;  // (lambda_actual, p_success)
};

/// Final amplitudes of the search confined to the {target, nontarget}
/// plane. |target|^2 is the success probability.
struct ReducedAmplitudes {
    Complex target;
    Complex nontarget;
};

/// Unclamped success probability
///   P_L = 1 - delta^2 T_L^2[ T_{1/L}(1/delta) sqrt(1-lambda_actual) ].
/// Kept separate for round-off diagnostics; may stray outside [0,1] by
/// less than 1e-12.
inline double success_probability_raw(const PhaseSchedule& s, double lambda_actual) {
    if (!(lambda_actual >= 0.0) || lambda_actual > 1.0)
        throw std::invalid_argument("success_probability: lambda_actual must lie in [0, 1]");
    // T_L(T_{1/L}(1/delta)) = 1/delta identically, so lambda_actual = 0
    // cancels to 0 regardless of the schedule.
    if (lambda_actual == 0.0) return 0.0;
    double inv_gamma = std::cosh(std::acosh(1.0 / s.delta) / s.order());
    double t = chebyshev_t(s.order(), inv_gamma * std::sqrt(1.0 - lambda_actual));
    return 1.0 - s.delta * s.delta * t * t;
}

/// success_probability_raw clamped into [0, 1]; clamping only absorbs
/// round-off smaller than 1e-12.
inline double success_probability(const PhaseSchedule& s, double lambda_actual) {
    double p = success_probability_raw(s, lambda_actual);
    if (p > 1.0 && p < 1.0 + 1e-12) return 1.0;
    if (p < 0.0 && p > -1e-12) return 0.0;
    return p;
}

/// Optimal iteration count of the standard search:
/// ceil(pi / (4 asin sqrt(lambda))) - 1.
inline int grover_iterations(double lambda) {
    if (!(lambda > 0.0) || lambda > 1.0)
        throw std::invalid_argument("grover_iterations: lambda must lie in (0, 1], got " +
                                    std::to_string(lambda));
    double x = kPi / (4.0 * std::asin(std::sqrt(lambda)));
    return detail::ceil_snapped(x) - 1;
}

/// Run the schedule inside the two-dimensional {target, nontarget} plane:
/// multiply out the per-iteration 2x2 restrictions of G(phi_j, varphi_j)
/// starting from (sqrt(lambda'), sqrt(1-lambda')). Independent of the
/// closed-form P_L and of the full statevector engine; the three routes are
/// cross-checked in tests.
inline ReducedAmplitudes reduced_propagator(const PhaseSchedule& s, double lambda_actual) {
    detail::check_lambda_open(lambda_actual, "reduced_propagator");
    const double la = lambda_actual;
    const double cross = std::sqrt(la * (1.0 - la));
    Complex a = std::sqrt(la);        // <alpha|state>
    Complex b = std::sqrt(1.0 - la);  // <beta|state>
    for (int j = 0; j < s.iterations; ++j) {
        const Complex u = 1.0 - std::polar(1.0, s.zero_phases[j]);
        const Complex ev = std::polar(1.0, s.oracle_phases[j]);
        // G = -(I - u |psi><psi|) diag(e^{i varphi}, 1) on this plane,
        // with |psi> = (sqrt(la), sqrt(1-la)).
        Complex na = -((1.0 - u * la) * ev * a - u * cross * b);
        Complex nb = -(-u * cross * ev * a + (1.0 - u * (1.0 - la)) * b);
        a = na;
        b = nb;
    }
    return {a, b};
}

/// Bhattacharyya-type overlap F = sum_j sqrt(p_j q_j) between two outcome
/// distributions; 1 iff equal, 0 iff disjoint support.
inline double statistical_fidelity(const Distribution& p_th, const Distribution& p_exp) {
    if (p_th.probs.size() != p_exp.probs.size())
        throw std::invalid_argument("statistical_fidelity: length mismatch (" +
                                    std::to_string(p_th.probs.size()) + " vs " +
                                    std::to_string(p_exp.probs.size()) + ")");
    double sum_th = 0.0, sum_exp = 0.0, f = 0.0;
    for (std::size_t j = 0; j < p_th.probs.size(); ++j) {
        double a = p_th.probs[j], b = p_exp.probs[j];
        if (a < 0.0 || b < 0.0)
            throw std::invalid_argument("statistical_fidelity: negative probability");
        sum_th += a;
        sum_exp += b;
        f += std::sqrt(a * b);
    }
    if (std::abs(sum_th - 1.0) > 1e-6 || std::abs(sum_exp - 1.0) > 1e-6)
        throw std::invalid_argument("statistical_fidelity: distributions must be normalized");
    return f;
}

/// Evaluate the success-probability curve at the given actual fractions.
inline SuccessCurve sample_success_curve(const PhaseSchedule& s,
                                         const std::vector<double>& lambdas) {
    SuccessCurve c;
    c.schedule = s;
    c.samples.reserve(lambdas.size());
    for (double la : lambdas) c.samples.emplace_back(la, success_probability(s, la));
    return c;
}

/// CSV serialization: header `lambda,p_success`, one sample per row,
/// shortest round-trip number formatting, LF line endings.
inline std::string to_csv(const SuccessCurve& curve) {
    std::string out = "lambda,p_success\n";
    for (const auto& [la, p] : curve.samples)
        out += format_shortest(la) + "," + format_shortest(p) + "\n";
    return out;
}

}  // namespace ampm
