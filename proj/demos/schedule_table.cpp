// Prints the exact schedules for lambda = 0.5 with l = 1, 2, 3 and runs
// each one through the statevector engine on the single-qubit instance to
// show the search succeeds with probability 1.
#include <cstdio>

#include "ampm/report.hpp"
#include "ampm/schedule.hpp"
#include "ampm/simulator.hpp"

int main() {
    using namespace ampm;
    SearchInstance inst = make_instance(1, {1});
    for (int l = 1; l <= 3; ++l) {
        PhaseSchedule s = build_schedule(l, 0.5);
        std::printf("%s", render_schedule_table(s).c_str());
        StateVector state = run_schedule(inst, s);
        std::printf("simulated P(target) = %.12f\n\n",
                    target_probability(state, inst));
    }
    return 0;
}
