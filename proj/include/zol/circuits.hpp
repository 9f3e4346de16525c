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
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zol/bits.hpp"
#include "zol/error.hpp"
#include "zol/problems.hpp"
#include "zol/statevec.hpp"

namespace zol {

enum class AlgorithmKind { grover, deutsch_jozsa, simon };

inline std::string to_string(AlgorithmKind k) {
    switch (k) {
        case AlgorithmKind::grover:
            return "grover";
        case AlgorithmKind::deutsch_jozsa:
            return "dj";
        case AlgorithmKind::simon:
            return "simon";
    }
    return "grover";
}

inline std::optional<AlgorithmKind> parse_kind(std::string_view s) {
    for (auto k : {AlgorithmKind::grover, AlgorithmKind::deutsch_jozsa, AlgorithmKind::simon}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    return std::nullopt;
}

/// The circuit family a built-in problem is normally run with.
inline AlgorithmKind default_kind(const OracleProblem& p) {
    switch (p.family()) {
        case ProblemFamily::grover:
            return AlgorithmKind::grover;
        case ProblemFamily::deutsch_jozsa:
            return AlgorithmKind::deutsch_jozsa;
        case ProblemFamily::simon:
        case ProblemFamily::periodic:
            return AlgorithmKind::simon;
        case ProblemFamily::custom:
            return p.value_bits() == 1 ? AlgorithmKind::deutsch_jozsa : AlgorithmKind::simon;
    }
    return AlgorithmKind::simon;
}

inline bool compatible(const OracleProblem& p, AlgorithmKind k) {
    switch (k) {
        case AlgorithmKind::grover:
            return p.value_bits() == 1 &&
                   (p.family() == ProblemFamily::grover || p.family() == ProblemFamily::custom);
        case AlgorithmKind::deutsch_jozsa:
            return p.value_bits() == 1 &&
                   (p.family() == ProblemFamily::deutsch_jozsa || p.family() == ProblemFamily::custom);
        case AlgorithmKind::simon:
            return p.family() == ProblemFamily::simon || p.family() == ProblemFamily::periodic ||
                   p.family() == ProblemFamily::custom;
    }
    return false;
}

/// B holds the setting, A the argument (and eventually the solution), V the
/// function value for XOR-style oracles. Phase-oracle circuits drop V.
inline RegisterLayout layout_for(const OracleProblem& p, AlgorithmKind k) {
    if (k == AlgorithmKind::simon) {
        return RegisterLayout{{"B", p.setting_len()}, {"A", p.arg_bits()}, {"V", p.value_bits()}};
    }
    return RegisterLayout{{"B", p.setting_len()}, {"A", p.arg_bits()}};
}

/// max(1, floor(π/4 · 2^(n/2))).
inline int grover_iterations(int n) {
    double k = std::floor(std::numbers::pi / 4 * std::pow(2.0, n / 2.0));
    return std::max(1, static_cast<int>(k));
}

/// sin²((2k+1)·asin(2^(-n/2))): success probability of k Grover iterations.
inline double grover_success_probability(int n, int k) {
    double theta = std::asin(std::pow(2.0, -n / 2.0));
    double s = std::sin((2 * k + 1) * theta);
    return s * s;
}

inline Unitary hadamard_all(const RegisterLayout& layout, const std::string& reg) {
    Unitary u(layout);
    u.then(Gate{"H_" + reg, false, HadamardGate{reg}});
    return u;
}

inline Unitary inversion_about_mean(const RegisterLayout& layout, const std::string& reg) {
    Unitary u(layout);
    u.then(Gate{"I_" + reg, false, DiffusionGate{reg}});
    return u;
}

namespace detail {

/// Setting index by B label, -1 outside σ; shared by oracle gates.
struct OracleLookup {
    std::vector<int32_t> index_by_label;
    std::vector<uint64_t> values;  // row-major: setting index x argument
    size_t args = 0;
};

inline std::shared_ptr<const OracleLookup> make_lookup(const OracleProblem& p) {
    if (p.setting_len() > 24) {
        throw CapExceeded("oracle lookup limited to 24-bit settings");
    }
    auto l = std::make_shared<OracleLookup>();
    l->index_by_label.assign(size_t{1} << p.setting_len(), -1);
    l->args = p.arg_count();
    l->values.resize(p.size() * l->args);
    for (size_t i = 0; i < p.size(); i++) {
        l->index_by_label[p.setting(i).value()] = static_cast<int32_t>(i);
        for (uint64_t a = 0; a < l->args; a++) {
            l->values[i * l->args + a] = p.eval_index(i, a);
        }
    }
    return l;
}

inline void require_register(const RegisterLayout& layout, const std::string& name, int width) {
    if (!layout.has(name)) {
        throw InvalidArgument("layout is missing register " + name);
    }
    if (layout.width(name) != width) {
        throw InvalidArgument("register " + name + " must have width " + std::to_string(width));
    }
}

}  // namespace detail

/// |b⟩_B|a⟩_A -> (-1)^{f_b(a)} |b⟩_B|a⟩_A; B-labels outside σ are untouched.
inline Unitary phase_oracle(const OracleProblem& p, const RegisterLayout& layout) {
    if (p.value_bits() != 1) {
        throw InvalidArgument("phase oracle needs 1-bit function values; use xor_oracle for problem '" + p.name() + "'");
    }
    detail::require_register(layout, "B", p.setting_len());
    detail::require_register(layout, "A", p.arg_bits());
    auto lookup = detail::make_lookup(p);
    int sb = layout.shift("B");
    int sa = layout.shift("A");
    uint64_t mb = low_mask(p.setting_len());
    uint64_t ma = low_mask(p.arg_bits());
    Unitary u(layout);
    u.then(Gate{"F", true, SignFlipGate{[=](uint64_t i) {
                    int32_t s = lookup->index_by_label[(i >> sb) & mb];
                    return s >= 0 && (lookup->values[static_cast<size_t>(s) * lookup->args + ((i >> sa) & ma)] & 1U);
                }}});
    return u;
}

inline Unitary phase_oracle(const OracleProblem& p) { return phase_oracle(p, layout_for(p, AlgorithmKind::grover)); }

/// |b⟩_B|a⟩_A|v⟩_V -> |b⟩_B|a⟩_A|v ⊕ f_b(a)⟩_V; identity outside σ.
inline Unitary xor_oracle(const OracleProblem& p, const RegisterLayout& layout) {
    if (!layout.has("V")) {
        throw InvalidArgument("xor oracle needs a V register");
    }
    detail::require_register(layout, "B", p.setting_len());
    detail::require_register(layout, "A", p.arg_bits());
    detail::require_register(layout, "V", p.value_bits());
    auto lookup = detail::make_lookup(p);
    int sb = layout.shift("B");
    int sa = layout.shift("A");
    int sv = layout.shift("V");
    uint64_t mb = low_mask(p.setting_len());
    uint64_t ma = low_mask(p.arg_bits());
    Unitary u(layout);
    u.then(Gate{"F", true, InvolutionGate{[=](uint64_t i) {
                    int32_t s = lookup->index_by_label[(i >> sb) & mb];
                    if (s < 0) {
                        return i;
                    }
                    return i ^ (lookup->values[static_cast<size_t>(s) * lookup->args + ((i >> sa) & ma)] << sv);
                }}});
    return u;
}

inline Unitary xor_oracle(const OracleProblem& p) { return xor_oracle(p, layout_for(p, AlgorithmKind::simon)); }

/// The unitary part of the solver's action in the two-register picture.
///   grover: H_A, then k times (F, I_A)
///   dj:     H_A, F, H_A
///   simon:  H_A, XOR oracle, H_A
inline Unitary build_unitary(const OracleProblem& p, AlgorithmKind kind) {
    if (!compatible(p, kind)) {
        throw InvalidArgument("algorithm '" + to_string(kind) + "' does not apply to problem '" + p.name() + "'");
    }
    RegisterLayout layout = layout_for(p, kind);
    Unitary u = hadamard_all(layout, "A");
    switch (kind) {
        case AlgorithmKind::grover: {
            Unitary iteration = phase_oracle(p, layout).then(inversion_about_mean(layout, "A"));
            for (int k = grover_iterations(p.arg_bits()); k > 0; k--) {
                u = u.then(iteration);
            }
            break;
        }
        case AlgorithmKind::deutsch_jozsa:
            u = u.then(phase_oracle(p, layout)).then(hadamard_all(layout, "A"));
            break;
        case AlgorithmKind::simon:
            u = u.then(xor_oracle(p, layout)).then(hadamard_all(layout, "A"));
            break;
    }
    return u;
}

/// Solver-only picture for one known setting b: registers A and V, the
/// oracle computing v ⊕ f_b(a). Preparing V in (|0⟩-|1⟩)/√2 turns it into a
/// phase oracle.
inline Unitary usual_unitary(const OracleProblem& p, AlgorithmKind kind, const BitString& b) {
    if (!compatible(p, kind)) {
        throw InvalidArgument("algorithm '" + to_string(kind) + "' does not apply to problem '" + p.name() + "'");
    }
    size_t bi = p.index_of(b);
    RegisterLayout layout{{"A", p.arg_bits()}, {"V", p.value_bits()}};
    int sa = layout.shift("A");
    uint64_t ma = low_mask(p.arg_bits());
    std::vector<uint64_t> table(p.arg_count());
    for (uint64_t a = 0; a < p.arg_count(); a++) {
        table[a] = p.eval_index(bi, a);
    }
    Gate oracle{"F", true, InvolutionGate{[table = std::move(table), sa, ma](uint64_t i) {
                    return i ^ table[(i >> sa) & ma];
                }}};
    Unitary u = hadamard_all(layout, "A");
    switch (kind) {
        case AlgorithmKind::grover:
            for (int k = grover_iterations(p.arg_bits()); k > 0; k--) {
                u.then(oracle);
                u.then(Gate{"I_A", false, DiffusionGate{"A"}});
            }
            break;
        case AlgorithmKind::deutsch_jozsa:
        case AlgorithmKind::simon:
            u.then(oracle);
            u.then(Gate{"H_A", false, HadamardGate{"A"}});
            break;
    }
    return u;
}

/// Σ_{b ∈ σ} |b⟩_B|0…⟩ with every other register blank.
inline State extended_input(const OracleProblem& p, const RegisterLayout& layout) {
    return uniform_superposition_over(layout, "B", p.settings());
}

/// |b⟩_B|0…⟩.
inline State sharp_input(const OracleProblem& p, const RegisterLayout& layout, const BitString& b) {
    p.index_of(b);
    std::vector<BitString> labels;
    for (const auto& r : layout.registers()) {
        labels.push_back(r.name == "B" ? b : BitString(0, r.width));
    }
    return make_basis_state(layout, labels);
}

/// One pass of the setter/solver protocol.
struct RunTranscript {
    std::string problem;
    AlgorithmKind kind = AlgorithmKind::grover;
    BitString b;
    int query_count = 0;
    std::string circuit;
    State input;              // Σ_b |b⟩_B|0…⟩
    double setting_probability = 0;
    State after_initial;      // |b⟩_B|0…⟩
    State after_unitary;      // Û|b⟩_B|0…⟩
    BitString final_outcome;  // A-register reading
    double final_probability = 0;
    State after_final;
    State alice_output;       // Û applied to the unprojected input
    std::vector<MeasurementOutcome> final_distribution;  // no post-states
};

/// Runs input -> initial B measurement -> Û -> final A measurement. A given
/// `b` is selected deterministically; otherwise the B measurement is sampled.
inline RunTranscript run_extended(const OracleProblem& p, AlgorithmKind kind, std::optional<BitString> b, Rng& rng) {
    Unitary u = build_unitary(p, kind);
    RunTranscript t;
    t.problem = p.name();
    t.kind = kind;
    t.query_count = u.query_count();
    t.circuit = u.describe();
    t.input = extended_input(p, u.layout());
    auto initial = outcome_distribution(t.input, "B");
    const MeasurementOutcome* chosen = nullptr;
    if (b) {
        p.index_of(*b);
        for (const auto& o : initial) {
            if (o.value == *b) {
                chosen = &o;
            }
        }
    } else {
        chosen = &sample(initial, rng);
    }
    t.b = chosen->value;
    t.setting_probability = chosen->probability;
    t.after_initial = project(t.input, "B", t.b).normalized();
    t.after_unitary = apply(t.after_initial, u);
    t.final_distribution = outcome_distribution(t.after_unitary, "A");
    const auto& fin = sample(t.final_distribution, rng);
    t.final_outcome = fin.value;
    t.final_probability = fin.probability;
    t.after_final = project(t.after_unitary, "A", t.final_outcome).normalized();
    t.alice_output = apply(t.input, u);
    return t;
}

struct InsufficientSamples {};

/// Recovers Simon's period from A-register samples by GF(2) elimination:
/// rank n-1 gives the unique nonzero p orthogonal to every sample, lower rank
/// is insufficient, rank n is a contradiction.
inline std::variant<BitString, InsufficientSamples> simon_postprocess(const std::vector<BitString>& samples, int n) {
    std::vector<uint64_t> rows;
    for (const auto& s : samples) {
        if (s.width() != n) {
            throw InvalidArgument("sample '" + s.str() + "' is not " + std::to_string(n) + " bits wide");
        }
        rows.push_back(s.value());
    }
    int rank = gf2_rank(rows);
    if (rank == n) {
        throw Contradiction("samples span GF(2)^" + std::to_string(n) + "; no nonzero period is orthogonal to all");
    }
    if (rank < n - 1) {
        return InsufficientSamples{};
    }
    auto null = gf2_null_space(rows, n);
    return BitString(null.front(), n);
}

}  // namespace zol
