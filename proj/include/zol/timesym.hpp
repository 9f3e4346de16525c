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

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "zol/akrule.hpp"
#include "zol/bits.hpp"
#include "zol/circuits.hpp"
#include "zol/error.hpp"
#include "zol/problems.hpp"
#include "zol/statevec.hpp"

namespace zol {

/// One zigzag outcome: the reduced setting set and its reduced input/output.
struct TimeSymInstance {
    BitString b;
    PartialMeasurement initial;
    PartialMeasurement final;
    /// "initial / final" descriptions of every halving producing this σ'.
    std::vector<std::string> descriptions;
    BitString final_outcome;
    SettingSet sigma_prime;
    State input_state;
    State output_state;
    bool relaxed = false;
    bool experimental = false;
};

/// Alice's input: Σ_{b ∈ σ} |b⟩_B|0…⟩, projection of the initial measurement
/// deferred.
inline State alice_input(const OracleProblem& p, const Unitary& u) { return extended_input(p, u.layout()); }

/// True when Û sends every |b⟩_B|0…⟩ to a state whose A register holds s(b)
/// with certainty and s(b) has the setting's width; then the final partial
/// measurement can be read off register A.
inline bool solution_in_a(const OracleProblem& p, const Unitary& u) {
    if (p.encoding() != SettingEncoding::kronecker || p.solution_len() != p.setting_len() ||
        p.arg_bits() != p.solution_len()) {
        return false;
    }
    const auto& layout = u.layout();
    State out = apply(alice_input(p, u), u);
    double weight = 0;
    auto amps = out.amplitudes();
    for (uint64_t i = 0; i < amps.size(); i++) {
        uint64_t bl = layout.extract(i, "B");
        auto idx = p.find(BitString(bl, p.setting_len()));
        if (idx && layout.extract(i, "A") == p.solution(*idx).value()) {
            weight += std::norm(amps[i]);
        }
    }
    return std::abs(weight - 1) < kTolerance;
}

namespace detail {

inline PartialMeasurement as_final(const OracleProblem& p, const PartialMeasurement& m, bool on_a) {
    PartialMeasurement f = m;
    f.target = on_a ? "A" : "B";
    if (on_a) {
        f.description = describe_measurement(p, m.matrix);
    }
    return f;
}

inline std::string orientation(const PartialMeasurement& initial, const PartialMeasurement& final) {
    return "initial " + initial.description + " on " + initial.target + " / final " + final.description + " on " +
           final.target;
}

/// Keeps the outcome M·x = value of the final measurement on the zigged
/// state, then zags back with Û†. The result is unnormalized.
inline State zag(const State& forward, const Unitary& u, const PartialMeasurement& final, uint64_t value) {
    const auto& layout = forward.layout();
    int width = layout.width(final.target);
    int shift = layout.shift(final.target);
    std::vector<char> keep(size_t{1} << width);
    for (uint64_t x = 0; x < keep.size(); x++) {
        keep[x] = final.matrix.apply(x) == value;
    }
    State kept = forward;
    auto amps = kept.amplitudes();
    uint64_t mask = low_mask(width);
    for (uint64_t i = 0; i < amps.size(); i++) {
        if (!keep[(i >> shift) & mask]) {
            amps[i] = 0;
        }
    }
    return apply_adjoint(kept, u);
}

inline TimeSymInstance zigzag_from(const OracleProblem& p, const Unitary& u, const Halving& h, const BitString& b,
                                   bool on_a, const State& forward) {
    auto verdict = is_valid_halving(p, b, h.first.matrix, h.second.matrix,
                                    h.relaxed ? Evenness::relaxed : Evenness::strict);
    if (!verdict.valid()) {
        throw InvalidArgument("halving (" + h.first.description + ", " + h.second.description +
                              ") is not valid at setting " + b.str() + ": fails " + verdict.failures());
    }
    TimeSymInstance t;
    t.b = b;
    t.initial = h.first;
    t.initial.target = "B";
    t.final = as_final(p, h.second, on_a);
    t.descriptions.push_back(orientation(t.initial, t.final));
    size_t bi = p.index_of(b);
    uint64_t content = on_a ? p.solution(bi).value() : b.value();
    t.final_outcome = BitString(t.final.matrix.apply(content), t.final.matrix.num_rows());
    t.sigma_prime = advanced_knowledge_set(p, b, h.second.matrix);
    State back = zag(forward, u, t.final, t.final_outcome.value());
    if (back.norm() < kTolerance) {
        throw Error("final outcome " + t.final_outcome.str() + " has zero probability");
    }
    t.input_state = back.normalized();
    t.output_state = apply(t.input_state, u);
    t.relaxed = h.relaxed;
    return t;
}

/// Rough amplitude-update count of simulating `runs` passes through Û.
inline void check_work(const Unitary& u, size_t runs, double max_work = 8e9) {
    double work = static_cast<double>(runs) * static_cast<double>(u.gates().size() + 1) *
                  static_cast<double>(u.layout().dimension());
    if (work > max_work) {
        throw CapExceeded("zigzag would need about " + std::to_string(static_cast<long long>(work / 1e9)) +
                          "e9 amplitude updates; try a smaller problem or --coordinate-only");
    }
}

}  // namespace detail

/// Runs the zigzag for a halving at setting b. The second measurement of the
/// halving is the final one; the first is the initial measurement, whose
/// projection stays deferred.
inline TimeSymInstance zigzag_instance(const OracleProblem& p, const Unitary& u, const Halving& h,
                                       const BitString& b) {
    State forward = apply(alice_input(p, u), u);
    return detail::zigzag_from(p, u, h, b, solution_in_a(p, u), forward);
}

/// Calls `visit` with every instance at setting b: each valid halving in both
/// orientations, deduplicated by σ' and ordered by σ'. Instances are built
/// one at a time.
template <class Visit>
void for_each_instance(const OracleProblem& p, const Unitary& u, const BitString& b, const HalvingOptions& options,
                       Visit&& visit) {
    bool on_a = solution_in_a(p, u);
    std::map<SettingSet, std::pair<Halving, std::vector<std::string>>> plans;
    for (const auto& h : enumerate_halvings(p, b, options)) {
        for (const Halving& oriented : {h, Halving{h.second, h.first, h.sigma2, h.sigma1, h.relaxed}}) {
            PartialMeasurement initial = oriented.first;
            initial.target = "B";
            auto text = detail::orientation(initial, detail::as_final(p, oriented.second, on_a));
            auto [it, fresh] = plans.try_emplace(oriented.sigma2, oriented, std::vector<std::string>{});
            auto& d = it->second.second;
            if (std::find(d.begin(), d.end(), text) == d.end()) {
                d.push_back(text);
            }
        }
    }
    detail::check_work(u, 2 * plans.size() + 1);
    State forward = apply(alice_input(p, u), u);
    for (const auto& [_, plan] : plans) {
        TimeSymInstance t = detail::zigzag_from(p, u, plan.first, b, on_a, forward);
        t.descriptions = plan.second;
        visit(std::move(t));
    }
}

inline std::vector<TimeSymInstance> enumerate_instances(const OracleProblem& p, const Unitary& u,
                                                        const BitString& b, const HalvingOptions& options = {}) {
    std::vector<TimeSymInstance> out;
    for_each_instance(p, u, b, options, [&](TimeSymInstance t) { out.push_back(std::move(t)); });
    return out;
}

/// Experimental: instances from arbitrary subset splits of σ (|σ| <= 8), with
/// the final selection applied to register B directly.
inline std::vector<TimeSymInstance> partition_instances(const OracleProblem& p, const Unitary& u,
                                                        const BitString& b) {
    std::map<SettingSet, TimeSymInstance> by_sigma;
    for (const auto& h : enumerate_partition_halvings(p, b)) {
        for (const auto* s : {&h.sigma1, &h.sigma2}) {
            if (by_sigma.contains(*s)) {
                continue;
            }
            TimeSymInstance t;
            t.b = b;
            t.final.target = "B";
            t.final.description = "subset";
            t.descriptions.push_back("subset split");
            t.final_outcome = BitString(1, 1);
            t.sigma_prime = *s;
            std::vector<bool> keep(p.size(), false);
            for (size_t i : *s) {
                keep[i] = true;
            }
            State kept = project(alice_input(p, u), "B", [&](uint64_t x) {
                auto idx = p.find(BitString(x, p.setting_len()));
                return idx && keep[*idx];
            });
            t.input_state = kept.normalized();
            t.output_state = apply(t.input_state, u);
            t.experimental = true;
            by_sigma.emplace(*s, std::move(t));
        }
    }
    std::vector<TimeSymInstance> out;
    for (auto& [_, t] : by_sigma) {
        out.push_back(std::move(t));
    }
    return out;
}

/// Sums the back-propagated states over every outcome of one final partial
/// measurement and returns the distance (up to phase) of the renormalized sum
/// to Alice's full input.
inline double reconstruct_check(const OracleProblem& p, const Unitary& u, const PartialMeasurement& final,
                                double max_work = 8e9) {
    State input = alice_input(p, u);
    State forward = apply(input, u);
    std::set<uint64_t> outcomes;
    auto amps = forward.amplitudes();
    int shift = u.layout().shift(final.target);
    uint64_t mask = low_mask(u.layout().width(final.target));
    for (uint64_t i = 0; i < amps.size(); i++) {
        if (std::norm(amps[i]) > kZeroProbability) {
            outcomes.insert(final.matrix.apply((i >> shift) & mask));
        }
    }
    detail::check_work(u, outcomes.size(), max_work);
    State sum = State::zero(u.layout());
    for (uint64_t v : outcomes) {
        sum += detail::zag(forward, u, final, v);
    }
    return phase_aligned_distance(sum.normalized(), input);
}

/// The final measurements appearing in valid halvings at any setting,
/// deduplicated by matrix, targeted as the zigzag would target them.
inline std::vector<PartialMeasurement> final_measurements(const OracleProblem& p, const Unitary& u,
                                                          const HalvingOptions& options = {}) {
    bool on_a = solution_in_a(p, u);
    std::map<std::vector<uint64_t>, PartialMeasurement> unique;
    for (const auto& b : p.settings()) {
        for (const auto& h : enumerate_halvings(p, b, options)) {
            for (const auto* m : {&h.first, &h.second}) {
                unique.emplace(m->matrix.rows(), detail::as_final(p, *m, on_a));
            }
        }
    }
    std::vector<PartialMeasurement> out;
    for (auto& [_, m] : unique) {
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace zol
