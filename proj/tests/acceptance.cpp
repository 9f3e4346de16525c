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

// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "zol/zol.hpp"

using namespace zol;

namespace {

constexpr double kTol = 1e-9;

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

State pairs_state(const RegisterLayout& layout, const std::vector<std::pair<std::string, std::string>>& terms) {
    State s = State::zero(layout);
    for (const auto& [b, a] : terms) {
        s[layout.basis_index({BitString::parse(b), BitString::parse(a)})] = 1;
    }
    return s.normalized();
}

std::set<std::string> names(const OracleProblem& p, const SettingSet& s) {
    std::set<std::string> out;
    for (size_t i : s) {
        out.insert(p.setting(i).str());
    }
    return out;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

Verdict grover_exactness() {
    Verdict v;
    auto p = grover_problem(2);
    Rng rng(1);
    for (const auto& b : p.settings()) {
        auto t = run_extended(p, AlgorithmKind::grover, b, rng);
        v.require(t.final_outcome == b && std::abs(t.final_probability - 1) <= kTol,
                  "b=" + b.str() + " gave " + t.final_outcome.str() + " with p=" + fmt(t.final_probability));
    }
    RegisterLayout layout = layout_for(p, AlgorithmKind::grover);
    Unitary uf = hadamard_all(layout, "A").then(phase_oracle(p));
    State after = apply(make_basis_state(layout, std::vector<std::string>{"01", "00"}), uf);
    State expected = State::zero(layout);
    const double signs[] = {1, -1, 1, 1};
    for (uint64_t a = 0; a < 4; a++) {
        expected[layout.basis_index({BitString::parse("01"), BitString(a, 2)})] = 0.5 * signs[a];
    }
    v.require(approx_equal_up_to_phase(after, expected), "post-oracle sign pattern differs from (1,-1,1,1)/2");
    if (v.pass) {
        v.detail = "all four settings exact; post-oracle state (1,-1,1,1)/2";
    }
    return v;
}

Verdict zigzag_exactness() {
    Verdict v;
    auto p = grover_problem(2);
    Unitary u = build_unitary(p, AlgorithmKind::grover);
    auto b = BitString::parse("01");
    Gf2Matrix left = Gf2Matrix::from_rows(2, {"10"});
    Gf2Matrix right = Gf2Matrix::from_rows(2, {"01"});
    auto verdict = is_valid_halving(p, b, left, right);
    Halving h{PartialMeasurement{"B", left, "left bit"}, PartialMeasurement{"B", right, "right bit"}, verdict.sigma1,
              verdict.sigma2, false};
    auto t = zigzag_instance(p, u, h, b);
    State in = pairs_state(u.layout(), {{"01", "00"}, {"11", "00"}});
    State out = pairs_state(u.layout(), {{"01", "01"}, {"11", "11"}});
    double din = phase_aligned_distance(t.input_state, in);
    double dout = phase_aligned_distance(t.output_state, out);
    v.require(t.final.target == "A", "final measurement not on A");
    v.require(din <= kTol && dout <= kTol, "input distance " + fmt(din) + ", output distance " + fmt(dout));
    if (v.pass) {
        v.detail = "input/output distances " + fmt(din) + " / " + fmt(dout);
    }
    return v;
}

Verdict instance_count() {
    Verdict v;
    auto p = grover_problem(2);
    Unitary u = build_unitary(p, AlgorithmKind::grover);
    std::set<std::set<std::string>> got;
    size_t count = 0;
    for (const auto& t : enumerate_instances(p, u, BitString::parse("01"))) {
        got.insert(names(p, t.sigma_prime));
        count++;
    }
    std::set<std::set<std::string>> want{{"01", "11"}, {"00", "01"}, {"01", "10"}};
    v.require(count == 3 && got == want, std::to_string(count) + " instances");
    if (v.pass) {
        v.detail = "3 instances: {01,11} {00,01} {01,10}";
    }
    return v;
}

Verdict reconstruction() {
    Verdict v;
    double worst = 0;
    size_t checked = 0;
    for (const auto& [p, kind] : std::vector<std::pair<OracleProblem, AlgorithmKind>>{
             {grover_problem(2), AlgorithmKind::grover}, {dj_problem(2), AlgorithmKind::deutsch_jozsa}}) {
        Unitary u = build_unitary(p, kind);
        for (const auto& f : final_measurements(p, u)) {
            double r = reconstruct_check(p, u, f);
            worst = std::max(worst, r);
            checked++;
            v.require(r < kTol, p.name() + " " + f.description + " residual " + fmt(r));
        }
    }
    v.require(checked > 0, "no final measurements");
    if (v.pass) {
        v.detail = std::to_string(checked) + " final measurements, max residual " + fmt(worst);
    }
    return v;
}

Verdict reduced_density() {
    Verdict v;
    double worst = 0;
    std::string worst_case;
    double worst_mixture = 0;
    size_t circuits = 0;
    std::vector<OracleProblem> problems;
    for (int n = 1; n <= 3; n++) {
        problems.push_back(grover_problem(n));
        problems.push_back(dj_problem(n));
    }
    problems.push_back(simon_problem(2));
    problems.push_back(simon_problem(3));
    problems.push_back(periodic_problem(3));
    for (const auto& p : problems) {
        for (auto kind : {AlgorithmKind::grover, AlgorithmKind::deutsch_jozsa, AlgorithmKind::simon}) {
            if (!compatible(p, kind)) {
                continue;
            }
            Unitary u = build_unitary(p, kind);
            State in = extended_input(p, u.layout());
            State out = apply(in, u);
            double d = reduced_density_distance(in, out, "B");
            circuits++;
            if (d > worst) {
                worst = d;
                worst_case = p.name() + " n=" + std::to_string(p.arg_bits());
            }
            // A mixture over b is a sum of sharp inputs; compare each branch.
            for (size_t i = 0; i < p.size(); i += std::max<size_t>(1, p.size() / 8)) {
                State sharp = sharp_input(p, u.layout(), p.setting(i));
                worst_mixture = std::max(worst_mixture, reduced_density_distance(sharp, apply(sharp, u), "B"));
            }
        }
    }
    v.require(worst < kTol, "superposition input: max distance " + fmt(worst) + " (" + worst_case +
                                "); entanglement with A removes the off-diagonal terms of rho_B. Populations and " +
                                "mixture/sharp inputs are preserved (max " + fmt(worst_mixture) + ")");
    if (v.pass) {
        v.detail = std::to_string(circuits) + " circuits, max distance " + fmt(worst);
    }
    return v;
}

Verdict ak_predictions() {
    Verdict v;
    struct Case {
        OracleProblem p;
        int predicted;
        std::optional<int> baseline;
    };
    std::vector<Case> cases{{grover_problem(2), 1, 3}, {grover_problem(4), 3, 15},       {dj_problem(1), 1, {}},
                            {dj_problem(2), 1, 3},     {dj_problem(3), 1, {}},           {simon_problem(2), 1, 3},
                            {periodic_problem(3), 1, {}}};
    std::ostringstream summary;
    for (const auto& c : cases) {
        auto r = ak_query_count(c.p);
        std::string id = c.p.name() + " n=" + std::to_string(c.p.arg_bits());
        v.require(r.predicted == c.predicted,
                  id + " predicted " + (r.predicted ? std::to_string(*r.predicted) : "none") + ", want " +
                      std::to_string(c.predicted));
        if (c.baseline) {
            v.require(r.classical_baseline == c.baseline,
                      id + " baseline " + (r.classical_baseline ? std::to_string(*r.classical_baseline) : "none") +
                          ", want " + std::to_string(*c.baseline));
        }
        summary << id << ":" << (r.predicted ? std::to_string(*r.predicted) : "-") << "/"
                << (r.classical_baseline ? std::to_string(*r.classical_baseline) : "n/a") << " ";
    }
    if (v.pass) {
        v.detail = "predicted/baseline " + summary.str();
    }
    return v;
}

Verdict grover_scaling() {
    Verdict v;
    HalvingOptions o;
    o.coordinate_only = true;
    size_t total = 0;
    for (int n : {2, 4, 6}) {
        auto p = grover_problem(n);
        QueryComplexitySolver solver(p);
        size_t root = size_t{1} << (n / 2);
        for (const auto& b : p.settings()) {
            auto hs = enumerate_halvings(p, b, o);
            v.require(!hs.empty(), "grover n=" + std::to_string(n) + " b=" + b.str() + " has no coordinate halving");
            for (const auto& h : hs) {
                total++;
                for (const auto* s : {&h.sigma1, &h.sigma2}) {
                    v.require(s->size() == root, "grover n=" + std::to_string(n) + " |sigma'|=" +
                                                     std::to_string(s->size()));
                    v.require(solver.cqc(*s) == static_cast<int>(root) - 1,
                              "grover n=" + std::to_string(n) + " cqc differs from 2^(n/2)-1");
                }
            }
        }
    }
    if (v.pass) {
        v.detail = std::to_string(total) + " coordinate halvings checked for n in {2,4,6}";
    }
    return v;
}

Verdict circuit_properties() {
    Verdict v;
    for (int n = 1; n <= 3; n++) {
        auto p = dj_problem(n);
        Unitary u = build_unitary(p, AlgorithmKind::deutsch_jozsa);
        for (size_t i = 0; i < p.size(); i++) {
            State out = apply(sharp_input(p, u.layout(), p.setting(i)), u);
            double zero = 0;
            for (const auto& o : outcome_distribution(out, "A")) {
                if (o.value.value() == 0) {
                    zero = o.probability;
                }
            }
            double want = p.solution(i).str() == "0" ? 1.0 : 0.0;
            v.require(std::abs(zero - want) <= kTol, "dj n=" + std::to_string(n) + " " + p.setting(i).str());
        }
    }
    auto simon = simon_problem(2);
    Rng rng(20260101);
    size_t runs = 0;
    for (const auto& b : simon.settings()) {
        std::vector<BitString> samples;
        uint64_t period = simon.solution_of(b).value();
        for (int k = 0; k < 100; k++, runs++) {
            auto t = run_extended(simon, AlgorithmKind::simon, b, rng);
            v.require(parity(t.final_outcome.value() & period) == 0, "simon sample not orthogonal to p_b");
            samples.push_back(t.final_outcome);
        }
        auto rec = simon_postprocess(samples, 2);
        v.require(std::holds_alternative<BitString>(rec) && std::get<BitString>(rec).value() == period,
                  "simon_postprocess did not recover p_b for b=" + b.str());
    }
    auto g = grover_problem(4);
    Unitary u = build_unitary(g, AlgorithmKind::grover);
    int k = grover_iterations(4);
    double want = std::pow(std::sin((2 * k + 1) * std::asin(0.25)), 2);
    double worst = 0;
    for (const auto& b : g.settings()) {
        State out = apply(sharp_input(g, u.layout(), b), u);
        double got = 0;
        for (const auto& o : outcome_distribution(out, "A")) {
            if (o.value == b) {
                got = o.probability;
            }
        }
        worst = std::max(worst, std::abs(got - want));
    }
    v.require(worst <= 1e-6, "grover n=4 success deviates by " + fmt(worst));
    if (v.pass) {
        v.detail = "dj n<=3 exhaustive, " + std::to_string(runs) + " simon runs, grover n=4 p=" + fmt(want);
    }
    return v;
}

Verdict validity_filter() {
    Verdict v;
    auto p = dj_problem(2);
    auto b = BitString::parse("0011");
    // The three ways to split the four table rows into two pairs.
    struct Split {
        std::vector<int> first, second;
        bool homogeneous;
    };
    std::vector<Split> splits{{{0, 1}, {2, 3}, true}, {{0, 2}, {1, 3}, false}, {{0, 3}, {1, 2}, false}};
    for (const auto& s : splits) {
        auto verdict = is_valid_halving(p, b, Gf2Matrix::coordinates(4, s.first), Gf2Matrix::coordinates(4, s.second));
        v.require(verdict.valid() == s.homogeneous, "split " + std::to_string(s.first[0]) +
                                                        std::to_string(s.first[1]) + " validity " +
                                                        (verdict.valid() ? "valid" : verdict.failures()));
        if (s.first == std::vector<int>{0, 2}) {
            v.require(!verdict.solution_blind, "mixed split {00,10}|{01,11} not flagged solution-blind");
        }
    }
    if (v.pass) {
        v.detail = "rows {00,01}|{10,11} valid; {00,10}|{01,11} and {00,11}|{01,10} fail (solution-blind)";
    }
    return v;
}

Verdict oracle_cross_checks() {
    Verdict v;
    constexpr size_t kExhaustiveLimit = 20000;
    // The naive minimax scans every argument at every node.
    auto samples_for = [](const OracleProblem& p) -> size_t { return p.arg_count() <= 64 ? 2000 : 200; };
    std::vector<OracleProblem> problems;
    for (int n = 1; n <= 10; n++) {
        problems.push_back(grover_problem(n));
    }
    for (int n = 1; n <= 4; n++) {
        problems.push_back(dj_problem(n));
    }
    problems.push_back(simon_problem(2));
    problems.push_back(simon_problem(3));
    problems.push_back(periodic_problem(3));
    std::mt19937_64 rng(10);
    size_t sets = 0;
    int exhaustive = 0;
    for (const auto& p : problems) {
        QueryComplexitySolver solver(p);
        auto check = [&](const CandidateSet& s) {
            sets++;
            int fast = solver.cqc(s);
            int slow = oracle::naive_cqc(p, s);
            v.require(fast == slow, p.name() + " n=" + std::to_string(p.arg_bits()) + " cqc " + std::to_string(fast) +
                                        " vs naive " + std::to_string(slow));
            auto tree = solver.witness_tree(s);
            v.require(tree.depth() == fast, p.name() + " witness depth differs from cqc");
            for (size_t i : s) {
                auto leaf = tree.run(p, i);
                v.require(leaf && *leaf == p.solution(i), p.name() + " witness tree misclassifies a member");
            }
        };
        size_t n = p.size();
        // Number of subsets of size 1..6, saturating at the limit.
        size_t count = 0;
        double binom = 1;
        for (size_t k = 1; k <= 6 && k <= n; k++) {
            binom = binom * static_cast<double>(n - k + 1) / static_cast<double>(k);
            count += binom > kExhaustiveLimit ? kExhaustiveLimit + 1 : static_cast<size_t>(binom);
        }
        if (count <= kExhaustiveLimit) {
            exhaustive++;
            std::function<void(size_t, CandidateSet&)> rec = [&](size_t start, CandidateSet& cur) {
                if (!cur.empty()) {
                    check(cur);
                }
                if (cur.size() == 6) {
                    return;
                }
                for (size_t i = start; i < n; i++) {
                    cur.push_back(i);
                    rec(i + 1, cur);
                    cur.pop_back();
                }
            };
            CandidateSet cur;
            rec(0, cur);
        } else {
            for (size_t t = 0; t < samples_for(p); t++) {
                size_t k = 1 + rng() % 6;
                CandidateSet s;
                while (s.size() < k) {
                    size_t i = rng() % n;
                    if (std::find(s.begin(), s.end(), i) == s.end()) {
                        s.push_back(i);
                    }
                }
                std::sort(s.begin(), s.end());
                check(s);
            }
        }
    }
    if (v.pass) {
        v.detail = std::to_string(sets) + " candidate sets over " + std::to_string(problems.size()) + " problems (" +
                   std::to_string(exhaustive) + " exhaustive, rest seeded samples)";
    }
    return v;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Verdict()> run;
    };
    std::vector<Criterion> criteria{
        {"AC1 grover n=2 exactness", grover_exactness},
        {"AC2 zigzag instance exactness", zigzag_exactness},
        {"AC3 instance count", instance_count},
        {"AC4 reconstruction", reconstruction},
        {"AC5 reduced-density invariance", reduced_density},
        {"AC6 AK predictions", ak_predictions},
        {"AC7 grover scaling", grover_scaling},
        {"AC8 circuit properties", circuit_properties},
        {"AC9 validity filter", validity_filter},
        {"AC10 oracle cross-checks", oracle_cross_checks},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = Verdict{false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %s: %s (%.2fs)\n", v.pass ? "PASS" : "FAIL", c.name, v.detail.c_str(), secs);
        std::fflush(stdout);
        failed += v.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
