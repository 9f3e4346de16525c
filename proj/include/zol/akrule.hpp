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
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "zol/bits.hpp"
#include "zol/circuits.hpp"
#include "zol/error.hpp"
#include "zol/problems.hpp"
#include "zol/qcomplexity.hpp"

namespace zol {

/// A linear observable M·x on one register.
struct PartialMeasurement {
    std::string target = "B";
    Gf2Matrix matrix;
    std::string description;
};

/// Indices into the problem's settings, ascending.
using SettingSet = std::vector<size_t>;

/// σ' = {b' ∈ σ : M·b' = M·b}.
inline SettingSet advanced_knowledge_set(const OracleProblem& p, const BitString& b, const Gf2Matrix& m) {
    if (m.cols() != p.setting_len()) {
        throw InvalidArgument("measurement has " + std::to_string(m.cols()) + " columns, settings have " +
                              std::to_string(p.setting_len()) + " bits");
    }
    uint64_t target = m.apply(p.setting(p.index_of(b)).value());
    SettingSet out;
    for (size_t i = 0; i < p.size(); i++) {
        if (m.apply(p.setting(i).value()) == target) {
            out.push_back(i);
        }
    }
    return out;
}

/// Human-readable name of a measurement on the setting register.
inline std::string describe_measurement(const OracleProblem& p, const Gf2Matrix& m) {
    if (!m.is_coordinate_map()) {
        return "M=" + m.str();
    }
    int len = p.setting_len();
    uint64_t support = m.coordinate_support();
    std::vector<int> positions;
    for (int c = 0; c < len; c++) {
        if ((support >> (len - 1 - c)) & 1U) {
            positions.push_back(c);
        }
    }
    std::string out;
    int w = p.value_bits();
    if (p.encoding() == SettingEncoding::table) {
        // Whole table rows read as function values at arguments.
        std::vector<std::string> rows;
        bool whole = true;
        for (size_t k = 0; k < positions.size() && whole; k += static_cast<size_t>(w)) {
            int first = positions[k];
            if (first % w != 0 || k + static_cast<size_t>(w) > positions.size()) {
                whole = false;
                break;
            }
            for (int j = 1; j < w; j++) {
                if (positions[k + static_cast<size_t>(j)] != first + j) {
                    whole = false;
                }
            }
            rows.push_back(to_bits(static_cast<uint64_t>(first / w), p.arg_bits()));
        }
        if (whole) {
            out = "f at {";
            for (size_t i = 0; i < rows.size(); i++) {
                out += (i ? "," : "") + rows[i];
            }
            return out + "}";
        }
    }
    out = "bits {";
    for (size_t i = 0; i < positions.size(); i++) {
        out += (i ? "," : "") + std::to_string(positions[i]);
    }
    return out + "}";
}

enum class Evenness {
    /// |σ'1| = |σ'2|.
    strict,
    /// max/min <= 2; used only where no strict halving exists and |σ| is not
    /// a perfect square.
    relaxed,
};

struct HalvingVerdict {
    bool joint = false;
    bool even = false;
    bool nontrivial = false;
    bool solution_blind = false;
    bool nonredundant = false;
    SettingSet sigma1;
    SettingSet sigma2;

    bool valid() const { return joint && even && nontrivial && solution_blind && nonredundant; }

    std::string failures() const {
        std::string out;
        auto add = [&](bool ok, const char* name) {
            if (!ok) {
                out += (out.empty() ? "" : ",") + std::string(name);
            }
        };
        add(joint, "joint");
        add(even, "even");
        add(nontrivial, "nontrivial");
        add(solution_blind, "solution-blind");
        add(nonredundant, "nonredundant");
        return out;
    }
};

namespace detail {

inline bool is_perfect_square(size_t n) {
    size_t r = static_cast<size_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) {
        r--;
    }
    while ((r + 1) * (r + 1) <= n) {
        r++;
    }
    return r * r == n;
}

inline bool sizes_even(size_t a, size_t b, Evenness mode) {
    if (mode == Evenness::strict) {
        return a == b;
    }
    return std::max(a, b) <= 2 * std::min(a, b);
}

inline size_t distinct_solutions_in(const OracleProblem& p, const SettingSet& s) {
    std::set<BitString> seen;
    for (size_t i : s) {
        seen.insert(p.solution(i));
    }
    return seen.size();
}

}  // namespace detail

/// Checks every condition on one candidate pair (M1, M2) at setting b.
inline HalvingVerdict is_valid_halving(const OracleProblem& p, const BitString& b, const Gf2Matrix& m1,
                                       const Gf2Matrix& m2, Evenness mode = Evenness::strict) {
    HalvingVerdict v;
    size_t bi = p.index_of(b);
    v.sigma1 = advanced_knowledge_set(p, b, m1);
    v.sigma2 = advanced_knowledge_set(p, b, m2);
    SettingSet both;
    std::set_intersection(v.sigma1.begin(), v.sigma1.end(), v.sigma2.begin(), v.sigma2.end(),
                          std::back_inserter(both));
    v.joint = both == SettingSet{bi};
    v.even = detail::sizes_even(v.sigma1.size(), v.sigma2.size(), mode);
    v.nontrivial = v.sigma1.size() > 1 && v.sigma2.size() > 1 && v.sigma1.size() < p.size() &&
                   v.sigma2.size() < p.size();
    bool ambiguous = p.distinct_solutions() >= 2;
    v.solution_blind = !ambiguous || (detail::distinct_solutions_in(p, v.sigma1) >= 2 &&
                                      detail::distinct_solutions_in(p, v.sigma2) >= 2);
    int r1 = m1.rank();
    int r2 = m2.rank();
    v.nonredundant = r1 + r2 == p.setting_len() && m1.stacked(m2).rank() == p.setting_len();
    return v;
}

struct Halving {
    PartialMeasurement first;
    PartialMeasurement second;
    SettingSet sigma1;
    SettingSet sigma2;
    bool relaxed = false;
};

struct HalvingOptions {
    /// Above this setting length only coordinate measurements are searched.
    int linear_max_setting_len = 6;
    /// Longest setting string accepted at all.
    int max_setting_len = 16;
    bool coordinate_only = false;
    /// Fall back to relaxed evenness for settings with no strict halving.
    bool allow_relaxed = true;
    /// Valid halvings allowed per setting before giving up.
    size_t max_halvings = 200000;
};

namespace detail {

/// Fixed-size bitset over setting indices.
class IndexMask {
   public:
    IndexMask() = default;
    explicit IndexMask(size_t n) : words_((n + 63) / 64, 0) {}

    void set(size_t i) { words_[i / 64] |= uint64_t{1} << (i % 64); }
    bool test(size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

    size_t count() const {
        size_t c = 0;
        for (uint64_t w : words_) {
            c += static_cast<size_t>(std::popcount(w));
        }
        return c;
    }

    IndexMask operator&(const IndexMask& o) const {
        IndexMask r = *this;
        for (size_t k = 0; k < words_.size(); k++) {
            r.words_[k] &= o.words_[k];
        }
        return r;
    }

    bool intersects(const IndexMask& o) const {
        for (size_t k = 0; k < words_.size(); k++) {
            if (words_[k] & o.words_[k]) {
                return true;
            }
        }
        return false;
    }

    SettingSet indices() const {
        SettingSet out;
        for (size_t k = 0; k < words_.size(); k++) {
            for (uint64_t w = words_[k]; w; w &= w - 1) {
                out.push_back(k * 64 + static_cast<size_t>(std::countr_zero(w)));
            }
        }
        return out;
    }

    auto operator<=>(const IndexMask&) const = default;

   private:
    std::vector<uint64_t> words_;
};

/// One candidate σ' with the measurement that produces it.
struct Side {
    IndexMask members;
    size_t size = 0;
    Gf2Matrix matrix;
};

struct HalvingContext {
    const OracleProblem& p;
    size_t b;
    IndexMask other_solution;  // settings whose solution differs from b's
    bool ambiguous;

    bool side_ok(const IndexMask& s, size_t size) const {
        if (size <= 1 || size >= p.size()) {
            return false;
        }
        return !ambiguous || s.intersects(other_solution);
    }
};

inline HalvingContext make_context(const OracleProblem& p, size_t b) {
    HalvingContext ctx{p, b, IndexMask(p.size()), p.distinct_solutions() >= 2};
    for (size_t i = 0; i < p.size(); i++) {
        if (p.solution(i) != p.solution(b)) {
            ctx.other_solution.set(i);
        }
    }
    return ctx;
}

/// Complementary pairs (row spaces forming a direct sum) among all linear
/// measurements: pairs of kernels K1, K2 with K1 ∩ K2 = {0}, dim sum m.
inline std::vector<std::pair<Side, Side>> linear_candidates(const HalvingContext& ctx) {
    const auto& p = ctx.p;
    int m = p.setting_len();
    static std::map<int, std::vector<std::pair<Subspace, uint64_t>>> cache;
    auto& spaces = cache[m];
    if (spaces.empty()) {
        for (auto& s : enumerate_subspaces(m)) {
            uint64_t members = 0;
            for (uint64_t x : gf2_span(s.basis)) {
                members |= uint64_t{1} << x;
            }
            spaces.emplace_back(std::move(s), members);
        }
    }
    uint64_t bv = p.setting(ctx.b).value();
    std::vector<Side> sides;
    std::vector<uint64_t> kernels;
    std::vector<int> dims;
    for (const auto& [space, members] : spaces) {
        if (space.dim() == 0 || space.dim() == m) {
            continue;
        }
        Side side{IndexMask(p.size()), 0, Gf2Matrix(m, gf2_rref(gf2_null_space(space.basis, m)))};
        for (size_t i = 0; i < p.size(); i++) {
            if ((members >> (p.setting(i).value() ^ bv)) & 1U) {
                side.members.set(i);
                side.size++;
            }
        }
        if (ctx.side_ok(side.members, side.size)) {
            sides.push_back(std::move(side));
            kernels.push_back(members);
            dims.push_back(space.dim());
        }
    }
    std::vector<std::pair<Side, Side>> out;
    for (size_t i = 0; i < sides.size(); i++) {
        for (size_t j = i + 1; j < sides.size(); j++) {
            if (dims[i] + dims[j] != m || std::popcount(kernels[i] & kernels[j]) != 1) {
                continue;
            }
            out.emplace_back(sides[i], sides[j]);
        }
    }
    return out;
}

/// Complementary pairs of coordinate measurements: reading bit set P versus
/// its complement.
inline std::vector<std::pair<Side, Side>> coordinate_candidates(const HalvingContext& ctx) {
    const auto& p = ctx.p;
    int m = p.setting_len();
    uint64_t full = low_mask(m);
    uint64_t bv = p.setting(ctx.b).value();
    // agree[mask] = settings agreeing with b on every bit in mask.
    std::vector<IndexMask> agree(size_t{1} << m);
    agree[0] = IndexMask(p.size());
    for (size_t i = 0; i < p.size(); i++) {
        agree[0].set(i);
    }
    std::vector<IndexMask> single(static_cast<size_t>(m), IndexMask(p.size()));
    for (int c = 0; c < m; c++) {
        for (size_t i = 0; i < p.size(); i++) {
            if (!(((p.setting(i).value() ^ bv) >> c) & 1U)) {
                single[static_cast<size_t>(c)].set(i);
            }
        }
    }
    for (uint64_t mask = 1; mask <= full; mask++) {
        int low = std::countr_zero(mask);
        agree[mask] = agree[mask & (mask - 1)] & single[static_cast<size_t>(low)];
    }
    std::vector<std::pair<Side, Side>> out;
    uint64_t top = uint64_t{1} << (m - 1);
    for (uint64_t mask = top; mask < full; mask++) {
        uint64_t rest = full & ~mask;
        const IndexMask& s1 = agree[mask];
        const IndexMask& s2 = agree[rest];
        size_t n1 = s1.count();
        size_t n2 = s2.count();
        if (!ctx.side_ok(s1, n1) || !ctx.side_ok(s2, n2)) {
            continue;
        }
        out.emplace_back(Side{s1, n1, Gf2Matrix::coordinate_mask(m, mask)},
                         Side{s2, n2, Gf2Matrix::coordinate_mask(m, rest)});
    }
    return out;
}

}  // namespace detail

/// Every valid halving at setting b, deduplicated by the unordered pair
/// (σ'1, σ'2) and sorted by (σ'1, σ'2) with σ'1 <= σ'2. Settings with no
/// strict halving fall back to relaxed evenness when |σ| is not a square.
inline std::vector<Halving> enumerate_halvings(const OracleProblem& p, const BitString& b,
                                               const HalvingOptions& options = {}) {
    int m = p.setting_len();
    if (m > options.max_setting_len) {
        throw CapExceeded("halving search limited to settings of " + std::to_string(options.max_setting_len) +
                          " bits; problem '" + p.name() + "' has " + std::to_string(m));
    }
    size_t bi = p.index_of(b);
    auto ctx = detail::make_context(p, bi);
    bool linear = !options.coordinate_only && m <= options.linear_max_setting_len;
    if (linear && m > 6) {
        throw CapExceeded("linear measurement search limited to 6-bit settings");
    }
    auto candidates = linear ? detail::linear_candidates(ctx) : detail::coordinate_candidates(ctx);

    auto collect = [&](Evenness mode) {
        std::map<std::pair<SettingSet, SettingSet>, Halving> unique;
        for (const auto& [x, y] : candidates) {
            if (!detail::sizes_even(x.size, y.size, mode)) {
                continue;
            }
            if ((x.members & y.members).count() != 1) {
                continue;
            }
            SettingSet s1 = x.members.indices();
            SettingSet s2 = y.members.indices();
            const detail::Side* a = &x;
            const detail::Side* c = &y;
            if (s2 < s1) {
                std::swap(s1, s2);
                std::swap(a, c);
            }
            auto key = std::make_pair(s1, s2);
            if (unique.contains(key)) {
                continue;
            }
            Halving h{PartialMeasurement{"B", a->matrix, describe_measurement(p, a->matrix)},
                      PartialMeasurement{"B", c->matrix, describe_measurement(p, c->matrix)}, s1, s2,
                      mode == Evenness::relaxed};
            unique.emplace(std::move(key), std::move(h));
            if (unique.size() > options.max_halvings) {
                throw CapExceeded("more than " + std::to_string(options.max_halvings) + " halvings at setting " +
                                  b.str() + "; try coordinate-only search");
            }
        }
        std::vector<Halving> out;
        for (auto& [_, h] : unique) {
            out.push_back(std::move(h));
        }
        return out;
    };

    auto out = collect(Evenness::strict);
    if (out.empty() && options.allow_relaxed && !detail::is_perfect_square(p.size())) {
        out = collect(Evenness::relaxed);
    }
    return out;
}

/// A split of σ into two arbitrary subsets through b (experimental).
struct PartitionHalving {
    SettingSet sigma1;
    SettingSet sigma2;
};

/// Subset pairs meeting joint, strict even, nontrivial and solution-blind,
/// with no requirement that either side come from a linear measurement.
inline std::vector<PartitionHalving> enumerate_partition_halvings(const OracleProblem& p, const BitString& b) {
    constexpr size_t kMaxSettings = 8;
    if (p.size() > kMaxSettings) {
        throw CapExceeded("partition search limited to " + std::to_string(kMaxSettings) + " settings; problem '" +
                          p.name() + "' has " + std::to_string(p.size()));
    }
    size_t bi = p.index_of(b);
    auto ctx = detail::make_context(p, bi);
    size_t n = p.size();
    std::vector<detail::IndexMask> subsets;
    for (uint64_t bits = 0; bits < (uint64_t{1} << n); bits++) {
        if (!((bits >> bi) & 1U)) {
            continue;
        }
        detail::IndexMask s(n);
        for (size_t i = 0; i < n; i++) {
            if ((bits >> i) & 1U) {
                s.set(i);
            }
        }
        if (ctx.side_ok(s, static_cast<size_t>(std::popcount(bits)))) {
            subsets.push_back(s);
        }
    }
    std::vector<PartitionHalving> out;
    for (size_t i = 0; i < subsets.size(); i++) {
        for (size_t j = i + 1; j < subsets.size(); j++) {
            if (subsets[i].count() != subsets[j].count() || (subsets[i] & subsets[j]).count() != 1) {
                continue;
            }
            SettingSet s1 = subsets[i].indices();
            SettingSet s2 = subsets[j].indices();
            if (s2 < s1) {
                std::swap(s1, s2);
            }
            out.push_back({s1, s2});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return std::tie(x.sigma1, x.sigma2) < std::tie(y.sigma1, y.sigma2);
    });
    return out;
}

inline std::vector<BitString> labels(const OracleProblem& p, const SettingSet& s) {
    std::vector<BitString> out;
    for (size_t i : s) {
        out.push_back(p.setting(i));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Query-count prediction

struct AkHalvingRecord {
    Halving halving;
    int cqc1 = 0;
    int cqc2 = 0;
};

struct AkSettingRecord {
    BitString b;
    BitString solution;
    bool relaxed = false;
    std::vector<AkHalvingRecord> halvings;
};

struct KnownAlgorithm {
    std::string name;
    /// Oracle calls (expected calls for Simon's repeated sampling).
    std::optional<double> queries;
    std::string note;
};

inline KnownAlgorithm known_algorithm(const OracleProblem& p) {
    int n = p.arg_bits();
    switch (p.family()) {
        case ProblemFamily::grover:
            return {"grover", static_cast<double>(grover_iterations(n)), "floor(pi/4*sqrt(2^n)) iterations"};
        case ProblemFamily::deutsch_jozsa:
            return {"deutsch-jozsa", 1.0, "single query"};
        case ProblemFamily::simon: {
            // Runs until n-1 independent nonzero samples: expected
            // Σ_{i<n-1} 1/(1 - 2^(i-(n-1))) over the 2^(n-1) outcomes.
            double e = 0;
            for (int i = 0; i < n - 1; i++) {
                e += 1.0 / (1.0 - std::pow(2.0, i - (n - 1)));
            }
            return {"simon", e, "expected runs until the samples reach rank n-1"};
        }
        case ProblemFamily::periodic:
            return {"period finding", std::nullopt, "polynomial in n; no fixed count"};
        case ProblemFamily::custom:
            return {"", std::nullopt, "no reference algorithm"};
    }
    return {};
}

struct AkReport {
    std::string problem;
    ProblemFamily family = ProblemFamily::custom;
    int arg_bits = 0;
    size_t num_settings = 0;
    bool coordinate_only = false;
    std::vector<AkSettingRecord> settings;
    std::vector<BitString> settings_without_halvings;
    /// Max over settings, halvings and both sides of the reduced classical count.
    std::optional<int> predicted;
    /// Best halving per setting, worst setting.
    std::optional<int> predicted_min;
    std::optional<int> classical_baseline;
    std::string baseline_note;
    KnownAlgorithm known;
    std::string comparison;
    bool inconclusive = false;
};

struct AkOptions {
    HalvingOptions halving;
    CqcOptions cqc;
    /// Memo budget for the full-σ baseline, which is often out of reach.
    size_t baseline_memo_entries = size_t{1} << 18;
    size_t max_settings = 4096;
};

/// Applies the rule at every setting and aggregates the reduced classical
/// query counts. A single solver memo is shared across all σ'.
inline AkReport ak_query_count(const OracleProblem& p, const AkOptions& options = {}) {
    if (p.size() > options.max_settings) {
        throw CapExceeded("AK analysis limited to " + std::to_string(options.max_settings) + " settings; problem '" +
                          p.name() + "' has " + std::to_string(p.size()));
    }
    AkReport r;
    r.problem = p.name();
    r.family = p.family();
    r.arg_bits = p.arg_bits();
    r.num_settings = p.size();
    r.coordinate_only =
        options.halving.coordinate_only || p.setting_len() > options.halving.linear_max_setting_len;
    QueryComplexitySolver solver(p, options.cqc);
    std::optional<int> worst_best;
    for (size_t i = 0; i < p.size(); i++) {
        AkSettingRecord rec{p.setting(i), p.solution(i), false, {}};
        auto halvings = enumerate_halvings(p, p.setting(i), options.halving);
        std::optional<int> best_here;
        for (auto& h : halvings) {
            AkHalvingRecord hr{std::move(h), 0, 0};
            hr.cqc1 = solver.cqc(hr.halving.sigma1);
            hr.cqc2 = solver.cqc(hr.halving.sigma2);
            rec.relaxed = hr.halving.relaxed;
            int worst = std::max(hr.cqc1, hr.cqc2);
            r.predicted = std::max(r.predicted.value_or(0), worst);
            best_here = std::min(best_here.value_or(worst), worst);
            rec.halvings.push_back(std::move(hr));
        }
        if (best_here) {
            worst_best = std::max(worst_best.value_or(0), *best_here);
        } else {
            r.settings_without_halvings.push_back(p.setting(i));
        }
        r.settings.push_back(std::move(rec));
    }
    r.predicted_min = worst_best;
    r.inconclusive = !r.predicted.has_value();
    try {
        CqcOptions baseline = options.cqc;
        baseline.max_memo_entries = options.baseline_memo_entries;
        r.classical_baseline = QueryComplexitySolver(p, baseline).cqc(all_settings(p));
    } catch (const CapExceeded& e) {
        r.baseline_note = e.what();
    }
    r.known = known_algorithm(p);
    if (r.predicted && r.known.queries) {
        double k = *r.known.queries;
        if (std::abs(*r.predicted - k) < 1e-9) {
            r.comparison = "matches known algorithm";
        } else if (*r.predicted < k) {
            r.comparison = "known algorithm suboptimal per AK rule";
        } else {
            r.comparison = "prediction exceeds known algorithm";
        }
    }
    return r;
}

}  // namespace zol
