#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "ampm/common.hpp"

namespace ampm {

// Phase schedule for the analytical multiphase matching (AMPM) condition.
// A schedule with `iterations` = l carries the l selective-phase pairs that
// make amplitude amplification exact (success probability 1) at
// `design_lambda`, the known fraction of target items.
//
// The default-constructed schedule is the legal empty schedule (l = 0),
// meaning "measure immediately"; it is the correct schedule for lambda = 1.
struct PhaseSchedule {
    int iterations = 0;                 // l
    double delta = 1.0;                 // residual-amplitude bound, in (0, 1]
    double gamma = 1.0;                 // Chebyshev argument rescale, in (0, 1]
    std::vector<double> zero_phases;    // phi_1..phi_l, applied via S_0
    std::vector<double> oracle_phases;  // varphi_1..varphi_l, applied via S_f
    double design_lambda = 1.0;

    int order() const { return 2 * iterations + 1; }  // L, always odd
    bool empty() const { return iterations == 0; }
};

struct CoincidenceReport {
    int iterations = 0;   // l
    int index = 0;        // m: (l+1)/2 for odd l, l/2 for even l
    double phi_m = 0.0;   // the matched-multiphase phase at position m
    double phi_s_abs = 0.0;  // |phi_s|, the single-phase-matching magnitude
    bool sign_rule_holds = false;
};

/// Chebyshev polynomial of the first kind, T_order(x), extended beyond
/// [-1, 1] with the hyperbolic branches so no complex intermediates appear.
inline double chebyshev_t(int order, double x) {
    if (order < 0) throw std::invalid_argument("chebyshev_t: negative order");
    if (x >= -1.0 && x <= 1.0) return std::cos(order * std::acos(x));
    if (x > 1.0) return std::cosh(order * std::acosh(x));
    double v = std::cosh(order * std::acosh(-x));
    return (order % 2 == 0) ? v : -v;
}

namespace detail {

// Ceiling that treats values within 1e-12 of an integer as that integer.
// Needed at exactness boundaries such as lambda = sin^2(pi/(2L)), where the
// analytic value is an exact integer but floating point lands a hair off.
inline int ceil_snapped(double x) {
    double r = std::round(x);
    if (std::abs(x - r) <= 1e-12) return static_cast<int>(r);
    return static_cast<int>(std::ceil(x));
}

// Signed principal arccot: arctan(1/y) in (-pi/2, 0) u (0, pi/2], with
// arccot(0) = pi/2. This branch reproduces the published phase values
// directly; any branch differing by pi shifts phi_j by 2*pi, which is
// physically identical.
inline double arccot(double y) {
    if (y == 0.0) return kPi / 2.0;
    return std::atan(1.0 / y);
}

inline void check_lambda_open(double lambda, const char* who) {
    if (!(lambda > 0.0) || !(lambda < 1.0))
        throw std::invalid_argument(std::string(who) +
                                    ": lambda must lie in (0, 1), got " +
                                    std::to_string(lambda));
}

}  // namespace detail

/// Smallest iteration count admitting an exact schedule for the given
/// fraction of target items: ceil(pi / (4 asin sqrt(lambda)) - 1/2).
inline int min_iterations(double lambda) {
    if (!(lambda > 0.0) || lambda > 1.0)
        throw std::invalid_argument("min_iterations: lambda must lie in (0, 1], got " +
                                    std::to_string(lambda));
    double x = kPi / (4.0 * std::asin(std::sqrt(lambda)));
    return detail::ceil_snapped(x - 0.5);
}

/// Residual-amplitude bound delta = 1 / T_L(cos(pi/(2L)) / sqrt(1-lambda)),
/// L = 2l+1. Requires l >= min_iterations(lambda) so the Chebyshev argument
/// stays >= 1 and delta lands in (0, 1].
inline double delta_for(int iterations, double lambda) {
    detail::check_lambda_open(lambda, "delta_for");
    if (iterations < 1)
        throw std::invalid_argument("delta_for: iteration count must be positive");
    int lmin = min_iterations(lambda);
    if (iterations < lmin)
        throw std::invalid_argument("delta_for: l = " + std::to_string(iterations) +
                                    " is below the minimum l_min = " + std::to_string(lmin) +
                                    " for lambda = " + std::to_string(lambda));
    int L = 2 * iterations + 1;
    double arg = std::cos(kPi / (2.0 * L)) / std::sqrt(1.0 - lambda);
    double delta = 1.0 / chebyshev_t(L, arg);
    // At the exactness boundary the argument is 1 up to rounding and delta
    // must be exactly 1 for the degenerate (standard Grover) limit to hold.
    if (std::abs(delta - 1.0) <= 1e-12) return 1.0;
    return delta;
}

/// gamma = 1 / T_{1/L}(1/delta) with the fractional-index convention
/// T_{1/L}(x) = cosh(arccosh(x) / L). Always lands in (0, 1].
inline double gamma_for(double delta, int order) {
    if (!(delta > 0.0) || delta > 1.0)
        throw std::invalid_argument("gamma_for: delta must lie in (0, 1], got " +
                                    std::to_string(delta));
    if (order < 1 || order % 2 == 0)
        throw std::invalid_argument("gamma_for: order must be a positive odd integer");
    return 1.0 / std::cosh(std::acosh(1.0 / delta) / order);
}

/// Build the full matched-multiphase schedule for known lambda:
///   phi_j = -2 arccot(sqrt(1-gamma^2) tan(2 pi j / L)),  varphi_j = phi_{l-j+1}.
inline PhaseSchedule build_schedule(int iterations, double lambda) {
    detail::check_lambda_open(lambda, "build_schedule");
    if (iterations < 1)
        throw std::invalid_argument("build_schedule: iteration count must be positive");
    PhaseSchedule s;
    s.iterations = iterations;
    s.design_lambda = lambda;
    s.delta = delta_for(iterations, lambda);
    int L = s.order();
    s.gamma = gamma_for(s.delta, L);
    double root = std::sqrt(std::max(0.0, 1.0 - s.gamma * s.gamma));
    s.zero_phases.resize(iterations);
    for (int j = 1; j <= iterations; ++j) {
        double t = std::tan(2.0 * kPi * j / L);  // finite: 2j/L never hits 1/2 or 1
        s.zero_phases[j - 1] = normalize_angle(-2.0 * detail::arccot(root * t));
    }
    s.oracle_phases.assign(s.zero_phases.rbegin(), s.zero_phases.rend());
    return s;
}

/// All target fractions at which the schedule succeeds with probability
/// exactly 1: lambda_j = 1 - gamma^2 cos^2((2j-1) pi / (2L)), j = 1..l,
/// strictly increasing. The first entry is design_lambda by construction.
inline std::vector<double> lambda_max_points(const PhaseSchedule& s) {
    std::vector<double> pts(s.iterations);
    int L = s.order();
    for (int j = 1; j <= s.iterations; ++j) {
        double c = std::cos((2.0 * j - 1.0) * kPi / (2.0 * L));
        pts[j - 1] = 1.0 - s.gamma * s.gamma * c * c;
    }
    return pts;
}

/// Magnitude of the exact single-phase-matching phase,
/// |phi_s| = arccos(1 - (1 - cos(pi/(2l+1))) / lambda). Both signs are
/// valid; callers pick signs explicitly.
inline double single_phase_magnitude(int iterations, double lambda) {
    detail::check_lambda_open(lambda, "single_phase_magnitude");
    if (iterations < 1)
        throw std::invalid_argument("single_phase_magnitude: iteration count must be positive");
    int L = 2 * iterations + 1;
    double arg = 1.0 - (1.0 - std::cos(kPi / L)) / lambda;
    if (arg < -1.0) {
        if (arg >= -1.0 - 1e-12) {
            arg = -1.0;  // exactness boundary, rounding only
        } else {
            throw std::invalid_argument(
                "single_phase_magnitude: l = " + std::to_string(iterations) +
                " is below the exactness threshold for lambda = " + std::to_string(lambda) +
                " (arccos argument " + std::to_string(arg) + " < -1)");
        }
    }
    return std::acos(arg);
}

/// Locate the schedule phase whose absolute value coincides with the
/// single-phase-matching phase: m = (l+1)/2 for odd l, l/2 for even l, and
/// phi_m = +|phi_s| (odd l) or -|phi_s| (even l). Phases are compared
/// modulo 2*pi.
inline CoincidenceReport coincidence_check(int iterations, double lambda) {
    PhaseSchedule s = build_schedule(iterations, lambda);
    CoincidenceReport r;
    r.iterations = iterations;
    r.index = (iterations % 2 == 1) ? (iterations + 1) / 2 : iterations / 2;
    r.phi_m = s.zero_phases[r.index - 1];
    r.phi_s_abs = single_phase_magnitude(iterations, lambda);
    double expected = (iterations % 2 == 1) ? r.phi_s_abs : -r.phi_s_abs;
    r.sign_rule_holds = angle_distance(r.phi_m, expected) <= 1e-10;
    return r;
}

}  // namespace ampm
