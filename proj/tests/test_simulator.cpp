#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ampm/analytic.hpp"
#include "ampm/schedule.hpp"
#include "ampm/simulator.hpp"

using namespace ampm;
using Catch::Approx;

namespace {

SearchInstance random_instance(std::mt19937& rng, int max_qubits, bool allow_full = false) {
    int n = 1 + static_cast<int>(rng() % max_qubits);
    std::uint64_t size = std::uint64_t{1} << n;
    std::uint64_t max_m = allow_full ? size : size - 1;
    std::uint64_t m = 1 + rng() % max_m;
    std::vector<std::uint64_t> all(size);
    for (std::uint64_t i = 0; i < size; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(m);
    return make_instance(n, all);
}

StateVector random_state(std::mt19937& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    StateVector s;
    s.amplitudes.resize(std::uint64_t{1} << n);
    double norm = 0.0;
    for (Complex& a : s.amplitudes) {
        a = Complex{g(rng), g(rng)};
        norm += std::norm(a);
    }
    for (Complex& a : s.amplitudes) a /= std::sqrt(norm);
    return s;
}

}  // namespace

TEST_CASE("make_instance validates targets", "[simulator]") {
    REQUIRE_THROWS_AS(make_instance(2, {}), std::invalid_argument);
    REQUIRE_THROWS_AS(make_instance(2, {1, 1}), std::invalid_argument);
    REQUIRE_THROWS_AS(make_instance(2, {4}), std::invalid_argument);
    REQUIRE_THROWS_AS(make_instance(0, {0}), std::invalid_argument);
    SearchInstance inst = make_instance(3, {5, 1});
    REQUIRE(inst.targets == std::vector<std::uint64_t>{1, 5});
    REQUIRE(inst.size() == 8);
    REQUIRE(inst.num_targets() == 2);
    REQUIRE(inst.lambda() == 0.25);  // exact rational
}

TEST_CASE("prepare_uniform amplitudes", "[simulator]") {
    SearchInstance one = make_instance(1, {1});
    StateVector s1 = prepare_uniform(one);
    REQUIRE(s1.amplitudes.size() == 2);
    REQUIRE(s1.amplitudes[0].real() == Approx(0.7071068).margin(1e-7));
    REQUIRE(s1.amplitudes[1].real() == Approx(0.7071068).margin(1e-7));
    REQUIRE(s1.amplitudes[0].imag() == 0.0);

    StateVector s2 = prepare_uniform(make_instance(2, {0}));
    for (const Complex& a : s2.amplitudes) REQUIRE(a.real() == Approx(0.5).margin(1e-15));

    // <alpha|psi> = sqrt(lambda) on a single-target 3-qubit instance
    SearchInstance three = make_instance(3, {5});
    StateVector s3 = prepare_uniform(three);
    REQUIRE(s3.amplitudes[5].real() == Approx(std::sqrt(1.0 / 8.0)).margin(1e-15));
    REQUIRE(target_probability(s3, three) == Approx(1.0 / 8.0).margin(1e-12));
}

TEST_CASE("prepare_uniform enforces the memory guard", "[simulator]") {
    REQUIRE_THROWS_AS(prepare_uniform(make_instance(25, {0})), capability_error);
    REQUIRE_THROWS_AS(prepare_uniform(make_instance(5, {0}), 4), capability_error);
    REQUIRE_NOTHROW(prepare_uniform(make_instance(5, {0}), 5));
}

TEST_CASE("apply_oracle_phase acts only on targets", "[simulator]") {
    SearchInstance inst = make_instance(1, {1});
    StateVector u = prepare_uniform(inst);

    StateVector same = apply_oracle_phase(u, inst, 0.0);
    REQUIRE(same.amplitudes[0] == u.amplitudes[0]);
    REQUIRE(same.amplitudes[1] == u.amplitudes[1]);

    StateVector flipped = apply_oracle_phase(u, inst, kPi);
    REQUIRE(flipped.amplitudes[0].real() == Approx(0.7071068).margin(1e-7));
    REQUIRE(flipped.amplitudes[1].real() == Approx(-0.7071068).margin(1e-7));

    StateVector rotated = apply_oracle_phase(u, inst, kPi / 2);
    REQUIRE(rotated.amplitudes[1].real() == Approx(0.0).margin(1e-12));
    REQUIRE(rotated.amplitudes[1].imag() == Approx(0.7071068).margin(1e-7));

    StateVector wrong;
    wrong.amplitudes.assign(4, {0.5, 0.0});
    REQUIRE_THROWS_AS(apply_oracle_phase(wrong, inst, 0.1), std::invalid_argument);
}

TEST_CASE("apply_zero_phase acts on the all-zeros amplitude", "[simulator]") {
    StateVector s;
    s.amplitudes = {Complex{0.6, 0.0}, Complex{0.8, 0.0}};
    StateVector same = apply_zero_phase(s, 0.0);
    REQUIRE(same.amplitudes[0] == Complex{0.6, 0.0});

    StateVector neg = apply_zero_phase(s, kPi);
    REQUIRE(neg.amplitudes[0].real() == Approx(-0.6).margin(1e-15));
    REQUIRE(neg.amplitudes[1].real() == Approx(0.8).margin(1e-15));

    SearchInstance inst = make_instance(1, {1});
    StateVector rot = apply_zero_phase(prepare_uniform(inst), kPi / 2);
    REQUIRE(rot.amplitudes[0].imag() == Approx(0.7071068).margin(1e-7));
    REQUIRE(rot.amplitudes[1].real() == Approx(0.7071068).margin(1e-7));
}

TEST_CASE("generalized iteration with standard phases is exact at quarter fraction",
          "[simulator]") {
    SearchInstance inst = make_instance(2, {3});
    StateVector s = apply_generalized_grover(prepare_uniform(inst), inst, kPi, kPi);
    REQUIRE(target_probability(s, inst) == Approx(1.0).margin(1e-12));
}

TEST_CASE("generalized iteration with zero phases negates the state", "[simulator]") {
    std::mt19937 rng(5);
    SearchInstance inst = make_instance(3, {2, 6});
    StateVector in = random_state(rng, 3);
    StateVector out = apply_generalized_grover(in, inst, 0.0, 0.0);
    for (std::size_t i = 0; i < in.amplitudes.size(); ++i)
        REQUIRE(std::abs(out.amplitudes[i] + in.amplitudes[i]) < 1e-12);
}

TEST_CASE("half-pi phases are exact on the single-qubit instance", "[simulator]") {
    SearchInstance inst = make_instance(1, {1});
    StateVector s = apply_generalized_grover(prepare_uniform(inst), inst, kPi / 2, kPi / 2);
    REQUIRE(target_probability(s, inst) == Approx(1.0).margin(1e-12));
}

TEST_CASE("run_schedule reaches the target with certainty", "[simulator]") {
    SearchInstance one_hot = make_instance(1, {1});
    REQUIRE(target_probability(run_schedule(one_hot, build_schedule(1, 0.5)), one_hot) ==
            Approx(1.0).margin(1e-9));

    SearchInstance zero_hot = make_instance(1, {0});
    REQUIRE(target_probability(run_schedule(zero_hot, build_schedule(3, 0.5)), zero_hot) ==
            Approx(1.0).margin(1e-9));

    SearchInstance wide = make_instance(4, {0, 2, 3, 5, 8, 9, 12, 15});
    PhaseSchedule s = build_schedule(1, 0.5);
    double p = target_probability(run_schedule(wide, s), wide);
    REQUIRE(p == Approx(1.0).margin(1e-9));
    REQUIRE(p == Approx(success_probability(s, 0.5)).margin(1e-9));
    REQUIRE(p == Approx(std::norm(reduced_propagator(s, 0.5).target)).margin(1e-9));
}

TEST_CASE("every operation preserves the norm", "[simulator]") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        SearchInstance inst = random_instance(rng, 6);
        StateVector s = random_state(rng, inst.num_qubits);
        std::uniform_real_distribution<double> angle(-kPi, kPi);
        double phi = angle(rng), varphi = angle(rng);
        REQUIRE(apply_oracle_phase(s, inst, varphi).norm_sq() == Approx(1.0).margin(1e-12));
        REQUIRE(apply_zero_phase(s, phi).norm_sq() == Approx(1.0).margin(1e-12));
        REQUIRE(apply_generalized_grover(s, inst, phi, varphi).norm_sq() ==
                Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("schedule dynamics stay in the two-dimensional subspace", "[simulator]") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0.011, 0.99);
    for (int trial = 0; trial < 25; ++trial) {
        SearchInstance inst = random_instance(rng, 6);
        double design = u(rng);
        PhaseSchedule sched = build_schedule(min_iterations(design) + 1, design);
        StateVector s = run_schedule(inst, sched);
        std::vector<bool> is_target(inst.size(), false);
        for (std::uint64_t t : inst.targets) is_target[t] = true;
        Complex target_amp = s.amplitudes[inst.targets[0]];
        Complex other_amp{0.0, 0.0};
        for (std::uint64_t i = 0; i < inst.size(); ++i) {
            if (!is_target[i]) {
                other_amp = s.amplitudes[i];
                break;
            }
        }
        for (std::uint64_t i = 0; i < inst.size(); ++i) {
            const Complex expect = is_target[i] ? target_amp : other_amp;
            REQUIRE(std::abs(s.amplitudes[i] - expect) < 1e-10);
        }
    }
}

TEST_CASE("simulation agrees with the closed form under mismatch", "[simulator]") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> u(0.011, 0.99);
    for (int trial = 0; trial < 60; ++trial) {
        SearchInstance inst = random_instance(rng, 10);
        double design = u(rng);
        int l = min_iterations(design) + static_cast<int>(rng() % 3);
        PhaseSchedule sched = build_schedule(l, design);
        double simulated = target_probability(run_schedule(inst, sched), inst);
        double analytic = success_probability(sched, inst.lambda());
        REQUIRE(simulated == Approx(analytic).margin(1e-9));
    }
}

TEST_CASE("standard-phase iteration equals the textbook operator", "[simulator]") {
    // dense brute-force construction: (2|psi><psi| - I) * oracle sign flip,
    // applied column by column
    std::mt19937 rng(47);
    for (int n = 1; n <= 5; ++n) {
        std::uint64_t dim = std::uint64_t{1} << n;
        std::vector<std::uint64_t> targets;
        for (std::uint64_t i = 0; i < dim; ++i)
            if (rng() % 4 == 0) targets.push_back(i);
        if (targets.empty()) targets.push_back(rng() % dim);
        SearchInstance inst = make_instance(n, targets);
        std::vector<bool> is_target(dim, false);
        for (std::uint64_t t : inst.targets) is_target[t] = true;

        const double mean_scale = 2.0 / static_cast<double>(dim);
        for (std::uint64_t col = 0; col < dim; ++col) {
            std::vector<Complex> v(dim, Complex{0.0, 0.0});
            v[col] = is_target[col] ? -1.0 : 1.0;  // oracle
            Complex mean{0.0, 0.0};
            for (const Complex& a : v) mean += a;
            std::vector<Complex> expect(dim);
            for (std::uint64_t r = 0; r < dim; ++r)
                expect[r] = mean * mean_scale - v[r];  // reflect about the mean

            StateVector basis;
            basis.amplitudes.assign(dim, Complex{0.0, 0.0});
            basis.amplitudes[col] = 1.0;
            StateVector got = apply_generalized_grover(basis, inst, kPi, kPi);
            for (std::uint64_t r = 0; r < dim; ++r)
                REQUIRE(std::abs(got.amplitudes[r] - expect[r]) < 1e-12);
        }
    }
}

TEST_CASE("swapping the phase lists reads the schedule backwards", "[simulator]") {
    // Because varphi_j = phi_{l-j+1}, exchanging the two lists produces the
    // same iteration sequence traversed in descending j: identical gates,
    // identical state. (Traversal direction itself matters: only the
    // ascending run is exact, which the exactness tests pin down.)
    std::mt19937 rng(61);
    std::uniform_real_distribution<double> u(0.011, 0.99);
    for (int trial = 0; trial < 20; ++trial) {
        SearchInstance inst = random_instance(rng, 5);
        double design = u(rng);
        PhaseSchedule sched = build_schedule(min_iterations(design) + 1, design);
        PhaseSchedule swapped = sched;
        std::swap(swapped.zero_phases, swapped.oracle_phases);

        StateVector via_swap = run_schedule(inst, swapped);
        StateVector descending = prepare_uniform(inst);
        for (int j = sched.iterations - 1; j >= 0; --j)
            descending = apply_generalized_grover(std::move(descending), inst,
                                                  sched.zero_phases[j],
                                                  sched.oracle_phases[j]);
        for (std::uint64_t i = 0; i < inst.size(); ++i)
            REQUIRE(via_swap.amplitudes[i] == descending.amplitudes[i]);
    }
    // l = 1 is the one case where the naive swap is a no-op: both lists
    // hold the same single phase.
    SearchInstance inst = make_instance(1, {1});
    PhaseSchedule s1 = build_schedule(1, 0.5);
    PhaseSchedule s1_swapped = s1;
    std::swap(s1_swapped.zero_phases, s1_swapped.oracle_phases);
    REQUIRE(target_probability(run_schedule(inst, s1), inst) ==
            Approx(target_probability(run_schedule(inst, s1_swapped), inst)).margin(1e-12));
}

TEST_CASE("target_probability and to_distribution", "[simulator]") {
    SearchInstance inst = make_instance(1, {1});
    StateVector u = prepare_uniform(inst);
    REQUIRE(target_probability(u, inst) == Approx(0.5).margin(1e-12));

    StateVector hot;
    hot.amplitudes = {Complex{0.0, 0.0}, Complex{1.0, 0.0}};
    REQUIRE(target_probability(hot, inst) == 1.0);

    Distribution d = to_distribution(u);
    REQUIRE(d.probs[0] == Approx(0.5).margin(1e-12));
    REQUIRE(d.probs[1] == Approx(0.5).margin(1e-12));

    StateVector skew;
    skew.amplitudes = {Complex{0.6, 0.0}, Complex{0.0, 0.8}};
    Distribution d2 = to_distribution(skew);
    REQUIRE(d2.probs[0] == Approx(0.36).margin(1e-12));
    REQUIRE(d2.probs[1] == Approx(0.64).margin(1e-12));

    StateVector bad;
    bad.amplitudes = {Complex{1.0, 0.0}, Complex{1.0, 0.0}};
    REQUIRE_THROWS_AS(to_distribution(bad), std::invalid_argument);
}
