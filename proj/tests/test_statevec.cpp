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

#include <cmath>
#include <cstdlib>
#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "zol/circuits.hpp"
#include "zol/problems.hpp"
#include "zol/statevec.hpp"

using namespace zol;

namespace {

const RegisterLayout kBA{{"B", 2}, {"A", 2}};

/// Σ_b |b⟩_B|b⟩_A / 2.
State entangled_pairs() {
    State s = State::zero(kBA);
    for (uint64_t b = 0; b < 4; b++) {
        s[kBA.basis_index({BitString(b, 2), BitString(b, 2)})] = 0.5;
    }
    return s;
}

/// A random product of the available gate kinds on `layout`.
Unitary random_unitary(const RegisterLayout& layout, std::mt19937_64& rng) {
    Unitary u(layout);
    uint64_t dim = layout.dimension();
    for (int k = 0; k < 6; k++) {
        const auto& reg = layout.registers()[rng() % layout.registers().size()].name;
        switch (rng() % 4) {
            case 0:
                u.then(Gate{"H", false, HadamardGate{reg}});
                break;
            case 1:
                u.then(Gate{"I", false, DiffusionGate{reg}});
                break;
            case 2: {
                uint64_t pattern = rng();
                u.then(Gate{"S", true, SignFlipGate{[pattern, dim](uint64_t i) { return (pattern >> (i % 64)) & 1U; }}});
                break;
            }
            default: {
                uint64_t flip = rng() % dim;
                u.then(Gate{"X", false, InvolutionGate{[flip](uint64_t i) { return i ^ flip; }}});
                break;
            }
        }
    }
    return u;
}

}  // namespace

TEST(statevec, basis_state_labels) {
    State s = make_basis_state(kBA, std::vector<std::string>{"01", "00"});
    EXPECT_EQ(s.support(), std::vector<uint64_t>{kBA.basis_index({BitString::parse("01"), BitString::parse("00")})});
    EXPECT_EQ(kBA.ket(s.support()[0]), "|01⟩_B|00⟩_A");
    State a = make_basis_state(RegisterLayout{{"A", 2}}, std::vector<std::string>{"00"});
    EXPECT_EQ(a.support(), std::vector<uint64_t>{0});
    EXPECT_THROW(make_basis_state(kBA, std::vector<std::string>{"011", "00"}), InvalidArgument);
}

TEST(statevec, basis_index_is_concatenation) {
    RegisterLayout bav{{"B", 2}, {"A", 2}, {"V", 1}};
    std::vector<BitString> labels{BitString::parse("01"), BitString::parse("00"), BitString::parse("0")};
    EXPECT_EQ(bav.basis_index(labels), 8u);
    EXPECT_EQ(bav.basis_index(labels), oracle::enumerated_index({2, 2, 1}, {"01", "00", "0"}));
    std::mt19937_64 rng(7);
    for (int k = 0; k < 50; k++) {
        uint64_t b = rng() % 4, a = rng() % 4, v = rng() % 2;
        EXPECT_EQ(bav.basis_index({BitString(b, 2), BitString(a, 2), BitString(v, 1)}),
                  oracle::enumerated_index({2, 2, 1}, {to_bits(b, 2), to_bits(a, 2), to_bits(v, 1)}));
    }
}

TEST(statevec, layout_validation) {
    EXPECT_THROW((RegisterLayout{{"A", 1}, {"A", 2}}), InvalidArgument);
    EXPECT_THROW((RegisterLayout{{"A", 0}}), InvalidArgument);
    EXPECT_THROW((RegisterLayout{{"A", 20}, {"B", 5}}), CapExceeded);
    ::setenv("ZOL_MAX_BITS", "4", 1);
    EXPECT_THROW((RegisterLayout{{"A", 3}, {"B", 2}}), CapExceeded);
    ::unsetenv("ZOL_MAX_BITS");
    EXPECT_NO_THROW((RegisterLayout{{"A", 3}, {"B", 2}}));
}

TEST(statevec, uniform_superpositions) {
    State s = uniform_superposition(kBA, "B");
    for (uint64_t b = 0; b < 4; b++) {
        EXPECT_NEAR(s[kBA.basis_index({BitString(b, 2), BitString(0, 2)})].real(), 0.5, 1e-12);
    }
    EXPECT_NEAR(s.norm(), 1, 1e-12);
    State one = uniform_superposition(RegisterLayout{{"A", 1}}, "A");
    EXPECT_NEAR(one[0].real(), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(one[1].real(), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_THROW(uniform_superposition(kBA, "V"), InvalidArgument);

    auto dj = dj_problem(2);
    auto tables = oracle::dj_tables(2);
    ASSERT_EQ(tables.size(), 8u);
    RegisterLayout layout{{"B", 4}, {"A", 2}};
    State masked = uniform_superposition_over(layout, "B", dj.settings());
    EXPECT_EQ(masked.support().size(), 8u);
    for (uint64_t i : masked.support()) {
        EXPECT_NEAR(masked[i].real(), 1 / std::sqrt(8.0), 1e-12);
        EXPECT_TRUE(tables.contains(layout.labels_of(i)[0].str()));
    }
}

TEST(statevec, apply_and_adjoint_roundtrip) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    RegisterLayout layout{{"B", 2}, {"A", 3}};
    for (int trial = 0; trial < 20; trial++) {
        std::vector<Complex> amps(layout.dimension());
        for (auto& a : amps) {
            a = {g(rng), g(rng)};
        }
        State psi = State(layout, amps).normalized();
        Unitary u = random_unitary(layout, rng);
        State out = apply(psi, u);
        EXPECT_NEAR(out.norm(), 1, 1e-9);
        EXPECT_TRUE(approx_equal_up_to_phase(apply_adjoint(out, u), psi));
        EXPECT_LT(unitarity_defect(u), 1e-9);
    }
    EXPECT_THROW(apply(State::zero(RegisterLayout{{"A", 2}}), Unitary(kBA)), InvalidArgument);
}

TEST(statevec, solver_only_grover_with_phase_kickback) {
    auto p = grover_problem(2);
    Unitary u = usual_unitary(p, AlgorithmKind::grover, BitString::parse("01"));
    const auto& layout = u.layout();
    double s = 1 / std::sqrt(2.0);
    State in = State::zero(layout);
    in[layout.basis_index({BitString::parse("00"), BitString::parse("0")})] = s;
    in[layout.basis_index({BitString::parse("00"), BitString::parse("1")})] = -s;
    State expected = State::zero(layout);
    expected[layout.basis_index({BitString::parse("01"), BitString::parse("0")})] = s;
    expected[layout.basis_index({BitString::parse("01"), BitString::parse("1")})] = -s;
    EXPECT_TRUE(approx_equal_up_to_phase(apply(in, u), expected));
    EXPECT_EQ(u.query_count(), 1);
}

TEST(statevec, measure_full_register) {
    State input = uniform_superposition(kBA, "B");
    auto outcomes = measure(input, "B");
    ASSERT_EQ(outcomes.size(), 4u);
    for (uint64_t b = 0; b < 4; b++) {
        EXPECT_EQ(outcomes[b].value, BitString(b, 2));
        EXPECT_NEAR(outcomes[b].probability, 0.25, 1e-12);
        EXPECT_EQ(outcomes[b].observable_id, "B");
        EXPECT_EQ(outcomes[b].post_state.support(),
                  std::vector<uint64_t>{kBA.basis_index({BitString(b, 2), BitString(0, 2)})});
    }
    State sharp = make_basis_state(kBA, std::vector<std::string>{"01", "01"});
    auto a = measure(sharp, "A");
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0].value.str(), "01");
    EXPECT_NEAR(a[0].probability, 1, 1e-12);
    EXPECT_TRUE(approx_equal_up_to_phase(a[0].post_state, sharp));
}

TEST(statevec, measure_partial_right_bit_and_parity) {
    State out = entangled_pairs();
    auto right = measure_partial(out, "A", Gf2Matrix::from_rows(2, {"01"}));
    ASSERT_EQ(right.size(), 2u);
    EXPECT_EQ(right[1].value.str(), "1");
    EXPECT_NEAR(right[1].probability, 0.5, 1e-12);
    State expected = State::zero(kBA);
    for (const char* b : {"01", "11"}) {
        expected[kBA.basis_index({BitString::parse(b), BitString::parse(b)})] = 1;
    }
    EXPECT_TRUE(approx_equal_up_to_phase(right[1].post_state, expected.normalized()));

    auto par = measure_partial(out, "A", Gf2Matrix::from_rows(2, {"11"}));
    // Brute-force filter of labels with odd parity.
    State filtered = State::zero(kBA);
    for (uint64_t i : out.support()) {
        uint64_t a = kBA.extract(i, "A");
        if (std::popcount(a) % 2 == 1) {
            filtered[i] = out[i];
        }
    }
    EXPECT_TRUE(approx_equal_up_to_phase(par[1].post_state, filtered.normalized()));
    EXPECT_EQ(par[1].post_state.support().size(), 2u);

    auto full = measure(out, "A");
    auto ident = measure_partial(out, "A", Gf2Matrix::identity(2));
    ASSERT_EQ(full.size(), ident.size());
    for (size_t k = 0; k < full.size(); k++) {
        EXPECT_EQ(full[k].value, ident[k].value);
        EXPECT_NEAR(full[k].probability, ident[k].probability, 1e-12);
        EXPECT_TRUE(approx_equal_up_to_phase(full[k].post_state, ident[k].post_state));
    }
    EXPECT_THROW(measure_partial(out, "A", Gf2Matrix::identity(3)), InvalidArgument);
}

TEST(statevec, born_completeness_and_orthogonal_projectors) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    RegisterLayout layout{{"B", 3}, {"A", 2}};
    std::vector<Complex> amps(layout.dimension());
    for (auto& a : amps) {
        a = {g(rng), g(rng)};
    }
    State psi = State(layout, amps).normalized();
    for (const auto* rows : {"110", "011", "111"}) {
        Gf2Matrix m = Gf2Matrix::from_rows(3, {rows});
        auto outcomes = measure_partial(psi, "B", m);
        double total = 0;
        State sum = State::zero(layout);
        for (const auto& o : outcomes) {
            total += o.probability;
            State piece = project(psi, "B", [&](uint64_t x) { return m.apply(x) == o.value.value(); });
            sum += piece;
            for (const auto& other : outcomes) {
                if (other.value != o.value) {
                    State q = project(piece, "B", [&](uint64_t x) { return m.apply(x) == other.value.value(); });
                    EXPECT_LT(q.norm(), 1e-12);
                }
            }
        }
        EXPECT_NEAR(total, 1, 1e-9);
        EXPECT_LT(phase_aligned_distance(sum, psi), 1e-12);
    }
}

TEST(statevec, measurements_of_a_and_b_commute) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<Complex> amps(kBA.dimension());
    for (auto& a : amps) {
        a = {g(rng), g(rng)};
    }
    State psi = State(kBA, amps).normalized();
    for (uint64_t b = 0; b < 4; b++) {
        for (uint64_t a = 0; a < 4; a++) {
            State x = project(project(psi, "B", BitString(b, 2)), "A", BitString(a, 2));
            State y = project(project(psi, "A", BitString(a, 2)), "B", BitString(b, 2));
            for (uint64_t i = 0; i < kBA.dimension(); i++) {
                EXPECT_LT(std::abs(x[i] - y[i]), 1e-15);
            }
        }
    }
}

TEST(statevec, reduced_density_distance_values) {
    State in = uniform_superposition(kBA, "B");
    State out = entangled_pairs();
    EXPECT_EQ(reduced_density_distance(in, in, "B"), 0);
    RegisterLayout b1{{"B", 1}, {"A", 1}};
    EXPECT_NEAR(reduced_density_distance(make_basis_state(b1, std::vector<std::string>{"0", "0"}),
                                         make_basis_state(b1, std::vector<std::string>{"1", "0"}), "B"),
                1, 1e-12);
    // Entangling with A keeps the populations of B (1/4 each) but removes the
    // 1/4 coherences between its values.
    EXPECT_NEAR(reduced_density_distance(in, out, "B"), 0.25, 1e-12);
    for (uint64_t b = 0; b < 4; b++) {
        State sharp_in = project(in, "B", BitString(b, 2)).normalized();
        State sharp_out = project(out, "B", BitString(b, 2)).normalized();
        EXPECT_LT(reduced_density_distance(sharp_in, sharp_out, "B"), 1e-12);
    }
}

TEST(statevec, phase_insensitive_equality) {
    State s = entangled_pairs();
    State t = s;
    t *= Complex(0, 1);
    EXPECT_TRUE(approx_equal_up_to_phase(s, t));
    t[0] += 1e-6;
    EXPECT_FALSE(approx_equal_up_to_phase(s, t));
}

TEST(statevec, outcome_distribution_matches_measure) {
    State out = entangled_pairs();
    auto full = measure(out, "A");
    auto dist = outcome_distribution(out, "A");
    ASSERT_EQ(full.size(), dist.size());
    for (size_t k = 0; k < full.size(); k++) {
        EXPECT_EQ(full[k].value, dist[k].value);
        EXPECT_EQ(full[k].probability, dist[k].probability);
        EXPECT_EQ(dist[k].post_state.amplitudes().size(), 0u);
    }
}

TEST(statevec, sampling_is_seeded) {
    auto outcomes = measure(uniform_superposition(kBA, "B"), "B");
    Rng r1(42), r2(42);
    for (int k = 0; k < 20; k++) {
        EXPECT_EQ(sample(outcomes, r1).value, sample(outcomes, r2).value);
    }
}
