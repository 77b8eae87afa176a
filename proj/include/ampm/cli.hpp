#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ampm/analytic.hpp"
#include "ampm/circuit.hpp"
#include "ampm/common.hpp"
#include "ampm/qasm.hpp"
#include "ampm/report.hpp"
#include "ampm/schedule.hpp"
#include "ampm/simulator.hpp"

#include "CLI11.hpp"

namespace ampm {
namespace cli {

// Exit codes: 0 success, 2 validation error, 3 capability bound exceeded.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitCapability = 3;

namespace detail {

inline void write_payload(const std::string& payload, const std::string& out_path,
                          std::ostream& out) {
    if (out_path.empty()) {
        out << payload;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write to '" + out_path + "'");
    f << payload;
}

inline double round4(double x) { return std::round(x * 1e4) / 1e4; }

inline PhaseSchedule schedule_for(double lambda, std::optional<int> l) {
    if (lambda == 1.0) {
        if (l.has_value() && *l != 0)
            throw std::invalid_argument(
                "lambda = 1 admits only the empty schedule (l = 0): every item is a target");
        return PhaseSchedule{};
    }
    int iterations = l.has_value() ? *l : min_iterations(lambda);
    return build_schedule(iterations, lambda);
}

inline std::string sweep_table(const SuccessCurve& c) {
    std::ostringstream out;
    out << "design lambda = " << format_fixed(c.schedule.design_lambda, 6)
        << ", l = " << c.schedule.iterations
        << ", delta = " << format_fixed(c.schedule.delta, 6) << "\n";
    out << "    lambda       p_success\n";
    for (const auto& [la, p] : c.samples) {
        char row[64];
        std::snprintf(row, sizeof(row), "%10.6f  %14.12f\n", la, p);
        out << row;
    }
    return out.str();
}

inline Json sweep_json(const SuccessCurve& c) {
    Json j;
    j["design_lambda"] = c.schedule.design_lambda;
    j["l"] = c.schedule.iterations;
    j["delta"] = c.schedule.delta;
    Json samples = Json::array();
    for (const auto& [la, p] : c.samples) {
        Json s;
        s["lambda"] = la;
        s["p_success"] = p;
        samples.push_back(std::move(s));
    }
    j["samples"] = std::move(samples);
    return j;
}

inline std::string compare_table(const std::vector<IterationRow>& rows) {
    std::ostringstream out;
    out << "    lambda  l_min  l_G  diff\n";
    for (const IterationRow& r : rows) {
        char row[64];
        std::snprintf(row, sizeof(row), "%10.6f  %5d  %3d  %4d\n", r.lambda, r.l_min,
                      r.l_grover, r.diff);
        out << row;
    }
    return out.str();
}

inline Json compare_json(const std::vector<IterationRow>& rows) {
    Json j;
    Json arr = Json::array();
    for (const IterationRow& r : rows) {
        Json row;
        row["lambda"] = r.lambda;
        row["l_min"] = r.l_min;
        row["l_G"] = r.l_grover;
        row["diff"] = r.diff;
        arr.push_back(std::move(row));
    }
    j["rows"] = std::move(arr);
    return j;
}

}  // namespace detail

/// Parse and dispatch one command line (program name excluded). All output
/// goes through the supplied streams; the return value is the process exit
/// code. Every output is a pure function of the flags (plus the seed when
/// sampling), so repeated invocations are byte-identical.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact multiphase quantum search: schedules, simulation, circuits"};
    app.require_subcommand(1);

    std::string format = "table";
    std::string out_path;
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"table", "json", "csv"}));
    app.add_option("--out", out_path, "Write output to this path instead of stdout");

    double lambda = 0.0;
    std::optional<int> opt_l;
    int num_qubits = 0;
    std::vector<std::uint64_t> targets;
    std::uint64_t shots = 0;
    std::uint64_t seed = 1;
    int max_qubits = kDefaultMaxQubits;
    int grid = 0;
    std::string path_a, path_b;

    CLI::App* c_schedule =
        app.add_subcommand("schedule", "Compute the exact phase schedule for a known lambda");
    c_schedule->fallthrough();
    c_schedule->add_option("--lambda", lambda, "Fraction of target items in (0, 1]")
        ->required();
    c_schedule->add_option("--l", opt_l, "Iteration count (default: minimum feasible)");

    CLI::App* c_run = app.add_subcommand("run", "Simulate the exact search on an instance");
    c_run->fallthrough();
    c_run->add_option("--n", num_qubits, "Query register size in qubits")->required();
    c_run->add_option("--targets", targets, "Comma-separated target basis indices")
        ->required()
        ->delimiter(',');
    c_run->add_option("--l", opt_l, "Iteration count (default: minimum feasible)");
    c_run->add_option("--shots", shots, "Sample this many measurement shots");
    c_run->add_option("--seed", seed, "Seed for shot sampling (default 1)");
    c_run->add_option("--max-qubits", max_qubits, "Memory guard override (default 24)");

    CLI::App* c_sweep =
        app.add_subcommand("sweep", "Success probability over a grid of actual fractions");
    c_sweep->fallthrough();
    c_sweep->add_option("--lambda", lambda, "Design fraction the schedule is exact for")
        ->required();
    c_sweep->add_option("--l", opt_l, "Iteration count")->required();
    c_sweep->add_option("--grid", grid, "Number of grid points (default 199)")
        ->default_val(199);

    CLI::App* c_compare = app.add_subcommand(
        "compare-iterations", "Minimum exact iterations vs the standard optimal count");
    c_compare->fallthrough();
    c_compare->add_option("--grid", grid, "Number of lambda grid points (default 1000)")
        ->default_val(1000);

    CLI::App* c_qasm =
        app.add_subcommand("qasm", "Export the full search circuit as OpenQASM 2.0");
    c_qasm->fallthrough();
    c_qasm->add_option("--n", num_qubits, "Query register size in qubits")->required();
    c_qasm->add_option("--targets", targets, "Comma-separated target basis indices")
        ->required()
        ->delimiter(',');
    c_qasm->add_option("--l", opt_l, "Iteration count")->required();

    CLI::App* c_fidelity = app.add_subcommand(
        "fidelity", "Statistical fidelity between two distribution files (CSV or JSON)");
    c_fidelity->fallthrough();
    c_fidelity->add_option("file_a", path_a, "First distribution file")->required();
    c_fidelity->add_option("file_b", path_b, "Second distribution file")->required();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (c_schedule->parsed()) {
            if (!(lambda > 0.0) || lambda > 1.0)
                throw std::invalid_argument("lambda must lie in (0, 1], got " +
                                            std::to_string(lambda));
            PhaseSchedule s = detail::schedule_for(lambda, opt_l);
            std::string payload;
            if (format == "json")
                payload = schedule_to_json(s).dump(2) + "\n";
            else if (format == "csv")
                payload = render_schedule_csv(s);
            else
                payload = render_schedule_table(s);
            detail::write_payload(payload, out_path, out);
        } else if (c_run->parsed()) {
            SearchInstance inst = make_instance(num_qubits, targets);
            PhaseSchedule s = detail::schedule_for(inst.lambda(), opt_l);
            RunReport r = make_run_report(inst, s, shots, seed, max_qubits);
            std::string payload;
            if (format == "json")
                payload = run_report_to_json(r).dump(2) + "\n";
            else if (format == "csv")
                payload = render_run_csv(r);
            else
                payload = render_run_table(r);
            detail::write_payload(payload, out_path, out);
        } else if (c_sweep->parsed()) {
            if (!(lambda > 0.0) || lambda > 1.0)
                throw std::invalid_argument("lambda must lie in (0, 1], got " +
                                            std::to_string(lambda));
            if (grid < 2) throw std::invalid_argument("grid must be at least 2");
            PhaseSchedule s = detail::schedule_for(lambda, opt_l);
            std::vector<double> grid_points(grid);
            const double lo = 0.001, hi = 0.999;
            for (int i = 0; i < grid; ++i)
                grid_points[i] = lo + (hi - lo) * i / (grid - 1);
            SuccessCurve curve = sample_success_curve(s, grid_points);
            std::string payload;
            if (format == "json")
                payload = detail::sweep_json(curve).dump(2) + "\n";
            else if (format == "table")
                payload = detail::sweep_table(curve);
            else
                payload = to_csv(curve);
            detail::write_payload(payload, out_path, out);
        } else if (c_compare->parsed()) {
            std::vector<IterationRow> rows = compare_iteration_rows(grid);
            std::string payload;
            if (format == "json")
                payload = detail::compare_json(rows).dump(2) + "\n";
            else if (format == "table")
                payload = detail::compare_table(rows);
            else
                payload = iteration_rows_csv(rows);
            detail::write_payload(payload, out_path, out);
        } else if (c_qasm->parsed()) {
            if (out_path.empty())
                throw std::invalid_argument("qasm requires --out <path> for the circuit file");
            SearchInstance inst = make_instance(num_qubits, targets);
            PhaseSchedule s = detail::schedule_for(inst.lambda(), opt_l);
            GateCircuit circuit = build_full(inst, s);
            std::string text = qasm::to_qasm(circuit);  // arity check before any write
            std::ofstream f(out_path, std::ios::binary);
            if (!f) throw std::invalid_argument("cannot write to '" + out_path + "'");
            f << text;
            // Predicted exact outcome, printed alongside the file.
            StateVector state = simulate_gates(circuit, 0);
            Distribution marginal = query_marginal(state, circuit.num_query);
            double p = 0.0;
            for (std::uint64_t t : inst.targets) p += marginal.probs[t];
            if (format == "json") {
                Json j;
                j["qasm_file"] = out_path;
                j["p_success"] = p;
                j["distribution"] = marginal.probs;
                out << j.dump(2) << "\n";
            } else if (format == "csv") {
                out << "state,probability\n";
                for (std::size_t i = 0; i < marginal.probs.size(); ++i)
                    out << i << "," << format_shortest(marginal.probs[i]) << "\n";
            } else {
                out << "wrote " << out_path << "\n";
                out << "p_success = " << format_fixed(p, 12) << "\n";
                out << "state  probability\n";
                for (std::size_t i = 0; i < marginal.probs.size(); ++i) {
                    char row[48];
                    std::snprintf(row, sizeof(row), "%5zu  %.12f\n", i, marginal.probs[i]);
                    out << row;
                }
            }
        } else if (c_fidelity->parsed()) {
            Distribution a = read_distribution_file(path_a);
            Distribution b = read_distribution_file(path_b);
            double f = statistical_fidelity(a, b);
            std::string payload;
            if (format == "json") {
                Json j;
                j["fidelity"] = detail::round4(f);
                payload = j.dump(2) + "\n";
            } else {
                payload = format_fixed(f, 4) + "\n";
            }
            detail::write_payload(payload, out_path, out);
        }
    } catch (const capability_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitCapability;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}

}  // namespace cli
}  // namespace ampm
