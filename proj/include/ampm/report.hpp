#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ampm/analytic.hpp"
#include "ampm/common.hpp"
#include "ampm/schedule.hpp"
#include "ampm/simulator.hpp"

#include "json.hpp"

namespace ampm {

using Json = nlohmann::ordered_json;

/// Everything one simulated search produces: the instance and schedule
/// summaries, the exact outcome distribution, and (optionally) seeded
/// multinomial counts.
struct RunReport {
    int num_qubits = 0;
    std::vector<std::uint64_t> targets;
    double lambda = 0.0;
    PhaseSchedule schedule;
    double p_success = 0.0;
    Distribution distribution;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> counts;  // per basis state; empty when shots == 0
};

/// Multinomial sampling from an exact distribution with a pinned generator
/// (mt19937_64 plus the 53-bit mantissa construction), so shot-based output
/// is reproducible across platforms and runs.
inline std::vector<std::uint64_t> sample_counts(const Distribution& dist,
                                                std::uint64_t shots, std::uint64_t seed) {
    std::vector<double> cdf(dist.probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.probs.size(); ++i) {
        acc += dist.probs[i];
        cdf[i] = acc;
    }
    std::vector<std::uint64_t> counts(dist.probs.size(), 0);
    std::mt19937_64 rng(seed);
    for (std::uint64_t s = 0; s < shots; ++s) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        std::size_t lo = 0, hi = cdf.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (cdf[mid] > u)
                hi = mid;
            else
                lo = mid + 1;
        }
        ++counts[lo];
    }
    return counts;
}

inline RunReport make_run_report(const SearchInstance& inst, const PhaseSchedule& sched,
                                 std::uint64_t shots = 0, std::uint64_t seed = 1,
                                 int max_qubits = kDefaultMaxQubits) {
    RunReport r;
    r.num_qubits = inst.num_qubits;
    r.targets = inst.targets;
    r.lambda = inst.lambda();
    r.schedule = sched;
    StateVector state = run_schedule(inst, sched, max_qubits);
    r.p_success = target_probability(state, inst);
    r.distribution = to_distribution(state);
    r.shots = shots;
    r.seed = seed;
    if (shots > 0) r.counts = sample_counts(r.distribution, shots, seed);
    return r;
}

// ---- schedule rendering (published-table conventions: 6 decimals) ----

inline std::string render_schedule_table(const PhaseSchedule& s) {
    std::ostringstream out;
    out << "lambda = " << format_fixed(s.design_lambda, 6) << "\n";
    if (s.empty()) {
        out << "l = 0: measure immediately (no iterations needed)\n";
        return out.str();
    }
    out << "l = " << s.iterations << ", L = " << s.order() << "\n";
    out << "delta = " << format_fixed(s.delta, 6) << "\n";
    out << "gamma = " << format_fixed(s.gamma, 6) << "\n";
    out << "  j        phi     varphi\n";
    for (int j = 1; j <= s.iterations; ++j) {
        char row[80];
        std::snprintf(row, sizeof(row), "%3d %10.6f %10.6f\n", j,
                      s.zero_phases[j - 1], s.oracle_phases[j - 1]);
        out << row;
    }
    return out.str();
}

inline std::string render_schedule_csv(const PhaseSchedule& s) {
    std::string out = "l,delta,j,phi,varphi\n";
    for (int j = 1; j <= s.iterations; ++j)
        out += std::to_string(s.iterations) + "," + format_fixed(s.delta, 6) + "," +
               std::to_string(j) + "," + format_fixed(s.zero_phases[j - 1], 6) + "," +
               format_fixed(s.oracle_phases[j - 1], 6) + "\n";
    return out;
}

namespace detail {

// Round to 6 decimals so JSON payloads match the printed table convention.
inline double round6(double x) { return std::round(x * 1e6) / 1e6; }

}  // namespace detail

inline Json schedule_to_json(const PhaseSchedule& s) {
    Json j;
    j["lambda"] = detail::round6(s.design_lambda);
    j["l"] = s.iterations;
    j["L"] = s.order();
    j["delta"] = detail::round6(s.delta);
    j["gamma"] = detail::round6(s.gamma);
    Json phi = Json::array(), varphi = Json::array();
    for (double p : s.zero_phases) phi.push_back(detail::round6(p));
    for (double p : s.oracle_phases) varphi.push_back(detail::round6(p));
    j["phi"] = std::move(phi);
    j["varphi"] = std::move(varphi);
    if (s.empty()) j["note"] = "measure immediately";
    return j;
}

// ---- run rendering ----

inline std::string render_run_table(const RunReport& r) {
    std::ostringstream out;
    out << "instance: n = " << r.num_qubits << ", N = " << (std::uint64_t{1} << r.num_qubits)
        << ", M = " << r.targets.size() << ", lambda = " << format_fixed(r.lambda, 6) << "\n";
    out << "schedule: l = " << r.schedule.iterations
        << ", delta = " << format_fixed(r.schedule.delta, 6) << "\n";
    out << "p_success = " << format_fixed(r.p_success, 12) << "\n";
    out << (r.shots > 0 ? "state  probability     count\n" : "state  probability\n");
    for (std::size_t i = 0; i < r.distribution.probs.size(); ++i) {
        char row[96];
        if (r.shots > 0)
            std::snprintf(row, sizeof(row), "%5zu  %.12f  %8llu\n", i,
                          r.distribution.probs[i],
                          static_cast<unsigned long long>(r.counts[i]));
        else
            std::snprintf(row, sizeof(row), "%5zu  %.12f\n", i, r.distribution.probs[i]);
        out << row;
    }
    if (r.shots > 0) out << "shots = " << r.shots << ", seed = " << r.seed << "\n";
    return out.str();
}

inline std::string render_run_csv(const RunReport& r) {
    std::string out = r.shots > 0 ? "state,probability,count\n" : "state,probability\n";
    for (std::size_t i = 0; i < r.distribution.probs.size(); ++i) {
        out += std::to_string(i) + "," + format_shortest(r.distribution.probs[i]);
        if (r.shots > 0) out += "," + std::to_string(r.counts[i]);
        out += "\n";
    }
    return out;
}

inline Json run_report_to_json(const RunReport& r) {
    Json j;
    Json inst;
    inst["n"] = r.num_qubits;
    inst["N"] = std::uint64_t{1} << r.num_qubits;
    inst["M"] = r.targets.size();
    inst["lambda"] = r.lambda;
    inst["targets"] = r.targets;
    j["instance"] = std::move(inst);
    Json sched;
    sched["l"] = r.schedule.iterations;
    sched["delta"] = r.schedule.delta;
    sched["gamma"] = r.schedule.gamma;
    sched["design_lambda"] = r.schedule.design_lambda;
    sched["phi"] = r.schedule.zero_phases;
    sched["varphi"] = r.schedule.oracle_phases;
    j["schedule"] = std::move(sched);
    j["p_success"] = r.p_success;
    j["distribution"] = r.distribution.probs;
    if (r.shots > 0) {
        j["shots"] = r.shots;
        j["seed"] = r.seed;
        j["counts"] = r.counts;
    }
    return j;
}

// ---- iteration-count comparison ----

struct IterationRow {
    double lambda;
    int l_min;
    int l_grover;
    int diff;
};

inline std::vector<IterationRow> compare_iteration_rows(int grid) {
    if (grid < 1) throw std::invalid_argument("compare_iterations: grid must be positive");
    std::vector<IterationRow> rows;
    rows.reserve(grid);
    for (int k = 1; k <= grid; ++k) {
        double lambda = static_cast<double>(k) / grid;
        int lm = min_iterations(lambda);
        int lg = grover_iterations(lambda);
        rows.push_back({lambda, lm, lg, lm - lg});
    }
    return rows;
}

inline std::string iteration_rows_csv(const std::vector<IterationRow>& rows) {
    std::string out = "lambda,l_min,l_G,diff\n";
    for (const IterationRow& r : rows)
        out += format_shortest(r.lambda) + "," + std::to_string(r.l_min) + "," +
               std::to_string(r.l_grover) + "," + std::to_string(r.diff) + "\n";
    return out;
}

// ---- distribution file reading (for the fidelity command) ----

/// Accepts a JSON array (or object with a "distribution"/"probs" array) or
/// a CSV with one probability per row, optionally `index,value` rows, with
/// an optional header line.
inline Distribution parse_distribution_text(const std::string& text) {
    Distribution d;
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        throw std::invalid_argument("distribution: empty input");
    if (text[first] == '[' || text[first] == '{') {
        Json j = Json::parse(text);  // throws on malformed input
        if (j.is_object()) {
            if (j.contains("distribution"))
                j = j["distribution"];
            else if (j.contains("probs"))
                j = j["probs"];
            else
                throw std::invalid_argument(
                    "distribution: JSON object lacks a 'distribution' array");
        }
        if (!j.is_array())
            throw std::invalid_argument("distribution: expected a JSON array");
        for (const auto& v : j) d.probs.push_back(v.get<double>());
        return d;
    }
    std::istringstream in(text);
    std::string line;
    bool first_line = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t comma = line.rfind(',');
        std::string field = (comma == std::string::npos) ? line : line.substr(comma + 1);
        char* end = nullptr;
        double v = std::strtod(field.c_str(), &end);
        if (end == field.c_str() || *end != '\0') {
            if (first_line) {  // header row
                first_line = false;
                continue;
            }
            throw std::invalid_argument("distribution: malformed row '" + line + "'");
        }
        first_line = false;
        d.probs.push_back(v);
    }
    if (d.probs.empty()) throw std::invalid_argument("distribution: no values found");
    return d;
}

inline Distribution read_distribution_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_distribution_text(buf.str());
}

}  // namespace ampm
