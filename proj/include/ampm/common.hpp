#pragma once

#include <charconv>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace ampm {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Raised when a request exceeds a capability bound (qubit limits, synthesis
/// scope, export gate arity) rather than being malformed. The CLI maps this
/// to a distinct exit code.
class capability_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Wrap an angle into (-pi, pi].
inline double normalize_angle(double a) {
    while (a <= -kPi) a += 2.0 * kPi;
    while (a > kPi) a -= 2.0 * kPi;
    return a;
}

/// Circular distance |a - b| mod 2*pi, in [0, pi]. Phases differing by a
/// full turn are physically identical.
inline double angle_distance(double a, double b) {
    double d = normalize_angle(a - b);
    return std::abs(d);
}

/// Shortest decimal string that round-trips to the same double. Used for
/// CSV/JSON payloads so parse + re-emit is byte-identical.
inline std::string format_shortest(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

/// Fixed-point formatting; digits = 6 matches the published table layout.
inline std::string format_fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
    return buf;
}

}  // namespace ampm
