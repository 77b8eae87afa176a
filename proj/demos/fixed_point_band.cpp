// Shows the fixed-point band: a schedule designed for one fraction keeps
// its success probability above 1 - delta^2 for every actual fraction at or
// beyond the design point.
#include <cstdio>

#include "ampm/analytic.hpp"
#include "ampm/schedule.hpp"

int main() {
    using namespace ampm;
    PhaseSchedule s = build_schedule(3, 0.25);
    std::printf("design lambda = %.2f, l = %d, floor 1 - delta^2 = %.9f\n",
                s.design_lambda, s.iterations, 1.0 - s.delta * s.delta);
    std::printf("%10s %16s\n", "lambda'", "p_success");
    for (int i = 0; i <= 30; ++i) {
        double la = 0.02 + (0.98 - 0.02) * i / 30.0;
        std::printf("%10.4f %16.12f%s\n", la, success_probability(s, la),
                    la >= s.design_lambda ? "  (in band)" : "");
    }
    return 0;
}
