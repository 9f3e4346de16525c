// Copyright 2026 The zol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "zol/akrule.hpp"
#include "zol/circuits.hpp"
#include "zol/problems.hpp"
#include "zol/qcomplexity.hpp"
#include "zol/statevec.hpp"
#include "zol/timesym.hpp"

namespace zol {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

/// Rounds to 12 decimals so reports do not depend on last-bit noise.
inline double tidy(double x) {
    double r = std::round(x * 1e12) / 1e12;
    return r == 0 ? 0.0 : r;
}

inline json strings(const std::vector<BitString>& v) {
    json out = json::array();
    for (const auto& b : v) {
        out.push_back(b.str());
    }
    return out;
}

inline json setting_labels(const OracleProblem& p, const SettingSet& s) { return strings(labels(p, s)); }

inline std::string fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// States

inline json state_to_json(const State& s) {
    json regs = json::array();
    for (const auto& r : s.layout().registers()) {
        regs.push_back({{"name", r.name}, {"width", r.width}});
    }
    json terms = json::array();
    auto amps = s.amplitudes();
    for (uint64_t i = 0; i < amps.size(); i++) {
        double re = detail::tidy(amps[i].real());
        double im = detail::tidy(amps[i].imag());
        if (re * re + im * im <= kZeroProbability) {
            continue;
        }
        terms.push_back({{"labels", detail::strings(s.layout().labels_of(i))}, {"re", re}, {"im", im}});
    }
    return {{"registers", regs}, {"terms", terms}};
}

/// q / 2^(k/2) for a small integer q, rendered with √2; decimals otherwise.
inline std::string exact_magnitude(double x) {
    for (int k = 0; k <= 48; k++) {
        double q = x * std::pow(2.0, k / 2.0);
        double r = std::round(q);
        if (r < 1 || r > 64 || std::abs(q - r) > 1e-9 * q) {
            continue;
        }
        std::string num = std::to_string(static_cast<int>(r));
        uint64_t d = uint64_t{1} << (k / 2);
        if (k == 0) {
            return num;
        }
        if (k % 2 == 0) {
            return num + "/" + std::to_string(d);
        }
        return num + "/" + (d == 1 ? "√2" : "(" + std::to_string(d) + "√2)");
    }
    return detail::fixed(x, 6);
}

namespace detail {

inline std::string ket_of(const json& regs, const json& labels) {
    std::string out;
    for (size_t i = 0; i < regs.size(); i++) {
        out += "|" + labels[i].get<std::string>() + "⟩_" + regs[i]["name"].get<std::string>();
    }
    return out;
}

inline bool is_real(const json& t) { return std::abs(t["im"].get<double>()) <= 1e-12; }

inline std::string complex_text(double re, double im) {
    return "(" + fixed(re, 6) + (im < 0 ? "-" : "+") + fixed(std::abs(im), 6) + "i)";
}

}  // namespace detail

inline constexpr size_t kMaxRenderedTerms = 64;

/// "1/2 (|00⟩_B|00⟩_A + |01⟩_B|01⟩_A)" style rendering of a state in JSON form.
inline std::string render_state(const json& state) {
    const json& regs = state["registers"];
    const json& terms = state["terms"];
    if (terms.empty()) {
        return "0";
    }
    bool real = true;
    std::optional<double> common;
    for (const auto& t : terms) {
        real = real && detail::is_real(t);
        double m = std::abs(t["re"].get<double>());
        if (!common) {
            common = m;
        } else if (std::abs(*common - m) > 1e-9) {
            common = -1;
        }
    }
    bool factor = real && *common > 0 && terms.size() > 1;
    std::string out;
    size_t shown = std::min(terms.size(), kMaxRenderedTerms);
    for (size_t i = 0; i < shown; i++) {
        const auto& t = terms[i];
        double re = t["re"].get<double>();
        double im = t["im"].get<double>();
        std::string ket = detail::ket_of(regs, t["labels"]);
        std::string coeff;
        bool negative = false;
        if (!real) {
            coeff = detail::complex_text(re, im) + " ";
        } else {
            negative = re < 0;
            if (!factor) {
                std::string mag = exact_magnitude(std::abs(re));
                coeff = mag == "1" ? "" : mag + " ";
            }
        }
        if (i == 0) {
            out += negative ? "-" : "";
        } else {
            out += negative ? " - " : " + ";
        }
        out += coeff + ket;
    }
    if (shown < terms.size()) {
        out += " + … (" + std::to_string(terms.size() - shown) + " more terms)";
    }
    if (factor) {
        std::string mag = exact_magnitude(*common);
        return mag == "1" ? out : mag + " (" + out + ")";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Report builders

inline json problem_summary(const OracleProblem& p) {
    return {{"name", p.name()},
            {"family", to_string(p.family())},
            {"encoding", to_string(p.encoding())},
            {"arg_bits", p.arg_bits()},
            {"value_bits", p.value_bits()},
            {"setting_len", p.setting_len()},
            {"settings", p.size()}};
}

inline json measurement_json(const PartialMeasurement& m) {
    return {{"target", m.target}, {"matrix", m.matrix.str()}, {"description", m.description}};
}

inline json simulate_report(const OracleProblem& p, AlgorithmKind kind, std::optional<BitString> b, uint64_t seed) {
    Rng rng(seed);
    RunTranscript t = run_extended(p, kind, b, rng);
    json dist = json::array();
    for (const auto& o : t.final_distribution) {
        dist.push_back({{"value", o.value.str()}, {"probability", detail::tidy(o.probability)}});
    }
    json stages = json::array();
    stages.push_back({{"name", "input"}, {"state", state_to_json(t.input)}});
    stages.push_back({{"name", "initial measurement of B"},
                      {"outcome", t.b.str()},
                      {"probability", detail::tidy(t.setting_probability)},
                      {"state", state_to_json(t.after_initial)}});
    stages.push_back({{"name", "after U"}, {"state", state_to_json(t.after_unitary)}});
    stages.push_back({{"name", "final measurement of A"},
                      {"outcome", t.final_outcome.str()},
                      {"probability", detail::tidy(t.final_probability)},
                      {"state", state_to_json(t.after_final)}});
    json out = {{"schema", kSchemaVersion},
                {"command", "simulate"},
                {"problem", problem_summary(p)},
                {"algorithm", to_string(kind)},
                {"seed", seed},
                {"b", t.b.str()},
                {"solution", p.solution_of(t.b).str()},
                {"circuit", t.circuit},
                {"query_count", t.query_count},
                {"stages", stages},
                {"final_outcome", t.final_outcome.str()},
                {"final_probability", detail::tidy(t.final_probability)},
                {"final_distribution", dist},
                {"alice_output", state_to_json(t.alice_output)},
                {"reduced_density_distance_B", detail::tidy(reduced_density_distance(t.input, t.alice_output, "B"))}};
    if (kind == AlgorithmKind::deutsch_jozsa) {
        out["decoded"] = t.final_outcome.value() == 0 ? "0" : "1";
    } else if (kind == AlgorithmKind::grover) {
        out["decoded"] = t.final_outcome.str();
    }
    return out;
}

inline json instance_json(const OracleProblem& p, const TimeSymInstance& t) {
    return {{"sigma_prime", detail::setting_labels(p, t.sigma_prime)},
            {"initial", measurement_json(t.initial)},
            {"final", measurement_json(t.final)},
            {"final_outcome", t.final_outcome.str()},
            {"descriptions", t.descriptions},
            {"relaxed", t.relaxed},
            {"experimental", t.experimental},
            {"input_state", state_to_json(t.input_state)},
            {"output_state", state_to_json(t.output_state)}};
}

inline json zigzag_report(const OracleProblem& p, AlgorithmKind kind, const BitString& b, bool partitions,
                          const HalvingOptions& options = {}) {
    Unitary u = build_unitary(p, kind);
    json inst = json::array();
    std::map<std::vector<uint64_t>, PartialMeasurement> finals;
    for_each_instance(p, u, b, options, [&](const TimeSymInstance& t) {
        inst.push_back(instance_json(p, t));
        finals.emplace(t.final.matrix.rows(), t.final);
    });
    json recon = json::array();
    // Shared budget in amplitude updates; later measurements are skipped.
    double budget = 2e9;
    double per_run = static_cast<double>(u.gates().size() + 1) * static_cast<double>(u.layout().dimension());
    for (const auto& [_, m] : finals) {
        double runs = std::min(static_cast<double>(p.size()), std::ldexp(1.0, m.matrix.num_rows()));
        json entry = {{"final", measurement_json(m)}, {"residual", nullptr}};
        if (runs * per_run <= budget) {
            budget -= runs * per_run;
            entry["residual"] = detail::tidy(reconstruct_check(p, u, m));
        }
        recon.push_back(entry);
    }
    json out = {{"schema", kSchemaVersion},
                {"command", "zigzag"},
                {"problem", problem_summary(p)},
                {"algorithm", to_string(kind)},
                {"b", b.str()},
                {"solution", p.solution_of(b).str()},
                {"instances", inst},
                {"reconstruction", recon}};
    if (partitions) {
        json extra = json::array();
        for (const auto& t : partition_instances(p, u, b)) {
            extra.push_back(instance_json(p, t));
        }
        out["experimental_partitions"] = extra;
    }
    return out;
}

inline json ak_report_json(const OracleProblem& p, const AkReport& r) {
    json settings = json::array();
    for (const auto& s : r.settings) {
        json hs = json::array();
        for (const auto& h : s.halvings) {
            hs.push_back({{"first", measurement_json(h.halving.first)},
                          {"second", measurement_json(h.halving.second)},
                          {"sigma1", detail::setting_labels(p, h.halving.sigma1)},
                          {"sigma2", detail::setting_labels(p, h.halving.sigma2)},
                          {"cqc1", h.cqc1},
                          {"cqc2", h.cqc2}});
        }
        settings.push_back({{"b", s.b.str()}, {"solution", s.solution.str()}, {"relaxed", s.relaxed}, {"halvings", hs}});
    }
    auto opt = [](const auto& o) { return o ? json(*o) : json(nullptr); };
    return {{"schema", kSchemaVersion},
            {"command", "ak-report"},
            {"problem", problem_summary(p)},
            {"coordinate_only", r.coordinate_only},
            {"predicted_quantum_queries", opt(r.predicted)},
            {"predicted_min", opt(r.predicted_min)},
            {"classical_baseline", opt(r.classical_baseline)},
            {"baseline_note", r.baseline_note},
            {"known_algorithm",
             {{"name", r.known.name},
              {"queries", r.known.queries ? json(detail::tidy(*r.known.queries)) : json(nullptr)},
              {"note", r.known.note}}},
            {"comparison", r.comparison},
            {"inconclusive", r.inconclusive},
            {"settings_without_halvings", detail::strings(r.settings_without_halvings)},
            {"settings", settings}};
}

inline json tree_json(const DecisionTree& t, int arg_bits, int value_bits) {
    if (t.is_leaf()) {
        return {{"solution", t.leaf->str()}};
    }
    json children = json::array();
    for (const auto& [v, c] : t.children) {
        children.push_back({{"value", to_bits(v, value_bits)}, {"then", tree_json(c, arg_bits, value_bits)}});
    }
    return {{"query", to_bits(t.query, arg_bits)}, {"children", children}};
}

inline json complexity_report(const OracleProblem& p, const CandidateSet& candidates, CqcOptions options = {}) {
    QueryComplexitySolver solver(p, options);
    int depth = solver.cqc(candidates);
    DecisionTree tree = solver.witness_tree(candidates);
    CandidateSet sorted = candidates;
    std::sort(sorted.begin(), sorted.end());
    return {{"schema", kSchemaVersion},
            {"command", "complexity"},
            {"problem", problem_summary(p)},
            {"candidates", detail::setting_labels(p, sorted)},
            {"cqc", depth},
            {"tree", tree_json(tree, p.arg_bits(), p.value_bits())}};
}

inline json list_problems_report() {
    json ps = json::array();
    ps.push_back({{"name", "grover"}, {"n_min", 1}, {"n_max", 10}, {"description", "locate the marked argument"}});
    ps.push_back({{"name", "dj"}, {"n_min", 1}, {"n_max", 4}, {"description", "constant (0) or balanced (1)"}});
    ps.push_back({{"name", "simon"}, {"n_min", 2}, {"n_max", 3}, {"description", "XOR period of a two-to-one function"}});
    ps.push_back({{"name", "periodic"}, {"n_min", 3}, {"n_max", 3}, {"description", "period r of (a + t) mod r, r in {2,4}"}});
    return {{"schema", kSchemaVersion}, {"command", "list-problems"}, {"problems", ps}};
}

// ---------------------------------------------------------------------------
// Text rendering (from JSON only)

namespace detail {

inline std::string join(const json& arr, const std::string& sep = ", ") {
    std::string out;
    for (size_t i = 0; i < arr.size(); i++) {
        out += (i ? sep : "") + arr[i].get<std::string>();
    }
    return out;
}

inline std::string set_text(const json& arr) { return "{" + join(arr) + "}"; }

inline std::string num(const json& v) {
    if (v.is_null()) {
        return "n/a";
    }
    if (v.is_number_integer() || v.is_number_unsigned()) {
        return std::to_string(v.get<int64_t>());
    }
    double d = v.get<double>();
    if (d == std::round(d)) {
        return std::to_string(static_cast<int64_t>(d));
    }
    return fixed(d, 6);
}

inline void problem_header(std::ostream& os, const json& p) {
    os << "problem: " << p["name"].get<std::string>() << " (" << p["family"].get<std::string>() << ", "
       << p["encoding"].get<std::string>() << ", n=" << p["arg_bits"].get<int>() << ", w=" << p["value_bits"].get<int>()
       << ", |σ|=" << p["settings"].get<size_t>() << ")\n";
}

inline std::string measurement_text(const json& m) {
    return m["description"].get<std::string>() + " on " + m["target"].get<std::string>() + " " +
           m["matrix"].get<std::string>();
}

inline void render_tree(std::ostream& os, const json& t, const std::string& indent) {
    if (t.contains("solution")) {
        os << indent << "solution " << t["solution"].get<std::string>() << "\n";
        return;
    }
    os << indent << "query f(" << t["query"].get<std::string>() << ")\n";
    for (const auto& c : t["children"]) {
        os << indent << "  = " << c["value"].get<std::string>() << ":\n";
        render_tree(os, c["then"], indent + "    ");
    }
}

inline void render_simulate(std::ostream& os, const json& j) {
    problem_header(os, j["problem"]);
    os << "algorithm: " << j["algorithm"].get<std::string>() << "  circuit: " << j["circuit"].get<std::string>()
       << "  queries: " << j["query_count"].get<int>() << "\n";
    os << "seed: " << j["seed"].get<uint64_t>() << "\n\n";
    for (const auto& s : j["stages"]) {
        os << s["name"].get<std::string>();
        if (s.contains("outcome")) {
            os << " -> " << s["outcome"].get<std::string>() << " (p=" << num(s["probability"]) << ")";
        }
        os << "\n  " << render_state(s["state"]) << "\n";
    }
    os << "\nfinal distribution:";
    for (const auto& d : j["final_distribution"]) {
        os << "  " << d["value"].get<std::string>() << ":" << num(d["probability"]);
    }
    os << "\nfinal outcome: " << j["final_outcome"].get<std::string>() << " (p=" << num(j["final_probability"])
       << ")\n";
    if (j.contains("decoded")) {
        os << "decoded solution: " << j["decoded"].get<std::string>() << "\n";
    }
    os << "solution s(b): " << j["solution"].get<std::string>() << "\n";
    os << "\nAlice-relative output (projection deferred):\n  " << render_state(j["alice_output"]) << "\n";
    os << "reduced density distance on B (input vs output): " << num(j["reduced_density_distance_B"]) << "\n";
}

inline void render_instances(std::ostream& os, const json& list) {
    size_t k = 1;
    for (const auto& t : list) {
        os << "[" << k++ << "] σ' = " << set_text(t["sigma_prime"]);
        if (t["relaxed"].get<bool>()) {
            os << "  (relaxed evenness)";
        }
        if (t["experimental"].get<bool>()) {
            os << "  (experimental)";
        }
        os << "\n    final outcome " << t["final_outcome"].get<std::string>() << " of "
           << measurement_text(t["final"]) << "\n";
        for (const auto& d : t["descriptions"]) {
            os << "    halving: " << d.get<std::string>() << "\n";
        }
        os << "    input:  " << render_state(t["input_state"]) << "\n";
        os << "    output: " << render_state(t["output_state"]) << "\n";
    }
}

inline void render_zigzag(std::ostream& os, const json& j) {
    problem_header(os, j["problem"]);
    os << "algorithm: " << j["algorithm"].get<std::string>() << "  b = " << j["b"].get<std::string>()
       << "  s(b) = " << j["solution"].get<std::string>() << "\n";
    os << "instances: " << j["instances"].size() << "\n";
    render_instances(os, j["instances"]);
    os << "reconstruction:\n";
    for (const auto& r : j["reconstruction"]) {
        os << "    " << measurement_text(r["final"]) << "  residual "
           << (r["residual"].is_null() ? std::string("skipped (too large)") : num(r["residual"])) << "\n";
    }
    if (j.contains("experimental_partitions")) {
        os << "experimental partition instances: " << j["experimental_partitions"].size() << "\n";
        render_instances(os, j["experimental_partitions"]);
    }
}

inline constexpr size_t kMaxListedHalvings = 12;

inline void render_ak(std::ostream& os, const json& j) {
    problem_header(os, j["problem"]);
    if (j["coordinate_only"].get<bool>()) {
        os << "measurements searched: coordinate subsets only\n";
    }
    for (const auto& s : j["settings"]) {
        const auto& hs = s["halvings"];
        os << "b = " << s["b"].get<std::string>() << "  s(b) = " << s["solution"].get<std::string>() << "  halvings: "
           << hs.size();
        if (s["relaxed"].get<bool>()) {
            os << " (relaxed evenness)";
        }
        os << "\n";
        if (hs.size() > kMaxListedHalvings) {
            int lo = 1 << 30;
            int hi = 0;
            for (const auto& h : hs) {
                int c = std::max(h["cqc1"].get<int>(), h["cqc2"].get<int>());
                lo = std::min(lo, c);
                hi = std::max(hi, c);
            }
            os << "    reduced counts " << lo << ".." << hi << "\n";
            continue;
        }
        for (const auto& h : hs) {
            os << "    " << set_text(h["sigma1"]) << " cqc " << h["cqc1"].get<int>() << "  |  " << set_text(h["sigma2"])
               << " cqc " << h["cqc2"].get<int>() << "    [" << h["first"]["description"].get<std::string>() << " / "
               << h["second"]["description"].get<std::string>() << "]\n";
        }
    }
    if (!j["settings_without_halvings"].empty()) {
        os << "settings without valid halvings: " << set_text(j["settings_without_halvings"]) << "\n";
    }
    os << "\npredicted quantum queries: " << num(j["predicted_quantum_queries"]);
    if (j["inconclusive"].get<bool>()) {
        os << " (inconclusive: no valid halvings)";
    }
    os << "\nmin aggregate: " << num(j["predicted_min"]) << "\n";
    os << "classical baseline: " << num(j["classical_baseline"]);
    if (!j["baseline_note"].get<std::string>().empty()) {
        os << " (" << j["baseline_note"].get<std::string>() << ")";
    }
    const auto& k = j["known_algorithm"];
    os << "\nknown algorithm: ";
    if (k["name"].get<std::string>().empty()) {
        os << "none";
    } else {
        os << k["name"].get<std::string>() << ", " << num(k["queries"]) << " queries (" << k["note"].get<std::string>()
           << ")";
    }
    os << "\n";
    if (!j["comparison"].get<std::string>().empty()) {
        os << "comparison: " << j["comparison"].get<std::string>() << "\n";
    }
}

inline void render_complexity(std::ostream& os, const json& j) {
    problem_header(os, j["problem"]);
    os << "candidates: " << set_text(j["candidates"]) << "\n";
    os << "cqc: " << j["cqc"].get<int>() << "\n";
    os << "witness tree:\n";
    render_tree(os, j["tree"], "  ");
}

inline void render_list(std::ostream& os, const json& j) {
    for (const auto& p : j["problems"]) {
        int lo = p["n_min"].get<int>();
        int hi = p["n_max"].get<int>();
        os << p["name"].get<std::string>() << "  n=" << lo;
        if (hi != lo) {
            os << ".." << hi;
        }
        os << "  " << p["description"].get<std::string>() << "\n";
    }
}

}  // namespace detail

/// Text form of any report. Depends only on the JSON.
inline std::string render_text(const json& report) {
    std::ostringstream os;
    std::string cmd = report.at("command").get<std::string>();
    if (cmd == "simulate") {
        detail::render_simulate(os, report);
    } else if (cmd == "zigzag") {
        detail::render_zigzag(os, report);
    } else if (cmd == "ak-report") {
        detail::render_ak(os, report);
    } else if (cmd == "complexity") {
        detail::render_complexity(os, report);
    } else if (cmd == "list-problems") {
        detail::render_list(os, report);
    } else {
        throw FormatError("unknown report command '" + cmd + "'");
    }
    return os.str();
}

}  // namespace zol
