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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "zol/bits.hpp"
#include "zol/error.hpp"
#include "zol/problems.hpp"

namespace zol {

/// Indices into a problem's setting list.
using CandidateSet = std::vector<size_t>;

inline CandidateSet all_settings(const OracleProblem& p) {
    CandidateSet s(p.size());
    for (size_t i = 0; i < s.size(); i++) {
        s[i] = i;
    }
    return s;
}

inline CandidateSet candidates_from(const OracleProblem& p, const std::vector<BitString>& members) {
    CandidateSet s;
    for (const auto& b : members) {
        s.push_back(p.index_of(b));
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

/// Adaptive classical strategy: either a leaf naming the solution, or a query
/// of argument `query` with one subtree per observed value.
struct DecisionTree {
    std::optional<BitString> leaf;
    uint64_t query = 0;
    std::vector<std::pair<uint64_t, DecisionTree>> children;

    bool is_leaf() const { return leaf.has_value(); }

    int depth() const {
        int d = 0;
        for (const auto& [_, c] : children) {
            d = std::max(d, 1 + c.depth());
        }
        return d;
    }

    /// Follows the tree with the oracle of setting `index`; nullopt when the
    /// tree has no branch for an observed value.
    std::optional<BitString> run(const OracleProblem& p, size_t index) const {
        const DecisionTree* node = this;
        while (!node->is_leaf()) {
            uint64_t v = p.eval_index(index, node->query);
            const DecisionTree* next = nullptr;
            for (const auto& [value, child] : node->children) {
                if (value == v) {
                    next = &child;
                }
            }
            if (!next) {
                return std::nullopt;
            }
            node = next;
        }
        return node->leaf;
    }
};

struct CqcOptions {
    size_t max_candidates = 64;
    /// Memo entries allowed before the search gives up.
    size_t max_memo_entries = size_t{1} << 20;
};

/// Exact worst-case deterministic query complexity over candidate sets of one
/// problem, by memoized minimax. The memo is the only mutable state; confine
/// one solver to one thread.
class QueryComplexitySolver {
   public:
    explicit QueryComplexitySolver(const OracleProblem& problem, CqcOptions options = {})
        : problem_(problem), options_(options) {}

    int cqc(const CandidateSet& candidates) { return solve(normalize(candidates)); }

    /// One optimal tree; ties go to the smallest argument.
    DecisionTree witness_tree(const CandidateSet& candidates) { return witness(normalize(candidates)); }

    size_t memo_size() const { return memo_.size(); }

   private:
    using Key = std::vector<uint32_t>;

    struct KeyHash {
        size_t operator()(const Key& k) const {
            uint64_t h = 1469598103934665603ULL;
            for (uint32_t x : k) {
                h = (h ^ x) * 1099511628211ULL;
            }
            return static_cast<size_t>(h);
        }
    };

    Key normalize(const CandidateSet& candidates) const {
        if (candidates.empty()) {
            throw InvalidArgument("candidate set must be nonempty");
        }
        Key k;
        for (size_t i : candidates) {
            if (i >= problem_.size()) {
                throw InvalidArgument("candidate index " + std::to_string(i) + " outside the setting list");
            }
            k.push_back(static_cast<uint32_t>(i));
        }
        std::sort(k.begin(), k.end());
        k.erase(std::unique(k.begin(), k.end()), k.end());
        if (k.size() > options_.max_candidates) {
            throw CapExceeded("candidate set of size " + std::to_string(k.size()) + " exceeds the cap of " +
                              std::to_string(options_.max_candidates));
        }
        return k;
    }

    bool settled(const Key& s) const {
        for (uint32_t i : s) {
            if (problem_.solution(i) != problem_.solution(s.front())) {
                return false;
            }
        }
        return true;
    }

    /// Children of querying `a`, ordered by observed value.
    std::vector<std::pair<uint64_t, Key>> split(const Key& s, uint64_t a) const {
        std::map<uint64_t, Key> groups;
        for (uint32_t i : s) {
            groups[problem_.eval_index(i, a)].push_back(i);
        }
        return {groups.begin(), groups.end()};
    }

    int solve(const Key& s) {
        if (settled(s)) {
            return 0;
        }
        if (auto it = memo_.find(s); it != memo_.end()) {
            return it->second;
        }
        int best = static_cast<int>(s.size());
        for (uint64_t a = 0; a < problem_.arg_count() && best > 1; a++) {
            auto groups = split(s, a);
            if (groups.size() < 2) {
                continue;
            }
            std::sort(groups.begin(), groups.end(),
                      [](const auto& x, const auto& y) { return x.second.size() > y.second.size(); });
            int cost = 0;
            for (const auto& [_, g] : groups) {
                cost = std::max(cost, 1 + solve(g));
                if (cost >= best) {
                    break;
                }
            }
            best = std::min(best, cost);
        }
        if (memo_.size() >= options_.max_memo_entries) {
            throw CapExceeded("query-complexity search exceeded " + std::to_string(options_.max_memo_entries) +
                              " memo entries");
        }
        memo_.emplace(s, best);
        return best;
    }

    DecisionTree witness(const Key& s) {
        DecisionTree t;
        if (settled(s)) {
            t.leaf = problem_.solution(s.front());
            return t;
        }
        int target = solve(s);
        for (uint64_t a = 0; a < problem_.arg_count(); a++) {
            auto groups = split(s, a);
            if (groups.size() < 2) {
                continue;
            }
            int cost = 0;
            for (const auto& [_, g] : groups) {
                cost = std::max(cost, 1 + solve(g));
            }
            if (cost != target) {
                continue;
            }
            t.query = a;
            for (const auto& [v, g] : groups) {
                t.children.emplace_back(v, witness(g));
            }
            return t;
        }
        throw Error("no optimal query found; memo is inconsistent");
    }

    const OracleProblem& problem_;
    CqcOptions options_;
    std::unordered_map<Key, int, KeyHash> memo_;
};

inline int cqc(const OracleProblem& p, const CandidateSet& candidates, CqcOptions options = {}) {
    return QueryComplexitySolver(p, options).cqc(candidates);
}

inline DecisionTree witness_tree(const OracleProblem& p, const CandidateSet& candidates, CqcOptions options = {}) {
    return QueryComplexitySolver(p, options).witness_tree(candidates);
}

}  // namespace zol
