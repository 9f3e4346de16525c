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
#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "zol/bits.hpp"
#include "zol/error.hpp"

namespace zol {

enum class ProblemFamily { grover, deutsch_jozsa, simon, periodic, custom };

/// How a setting string relates to the oracle. `kronecker`: b is the marked
/// argument and f_b(a) = δ(b, a). `table`: b is the function table, value of
/// a = 0 first, `value_bits` per row.
enum class SettingEncoding { kronecker, table };

inline std::string to_string(ProblemFamily f) {
    switch (f) {
        case ProblemFamily::grover:
            return "grover";
        case ProblemFamily::deutsch_jozsa:
            return "dj";
        case ProblemFamily::simon:
            return "simon";
        case ProblemFamily::periodic:
            return "periodic";
        case ProblemFamily::custom:
            return "custom";
    }
    return "custom";
}

inline std::optional<ProblemFamily> parse_family(std::string_view s) {
    for (auto f : {ProblemFamily::grover, ProblemFamily::deutsch_jozsa, ProblemFamily::simon, ProblemFamily::periodic,
                   ProblemFamily::custom}) {
        if (to_string(f) == s) {
            return f;
        }
    }
    return std::nullopt;
}

inline std::string to_string(SettingEncoding e) { return e == SettingEncoding::kronecker ? "kronecker" : "table"; }

/// A finite family of oracle functions f_b indexed by settings b ∈ σ, with the
/// solution map s(b). Immutable after construction.
class OracleProblem {
   public:
    OracleProblem(std::string name, ProblemFamily family, SettingEncoding encoding, int arg_bits, int value_bits,
                  std::vector<BitString> settings, std::vector<BitString> solutions)
        : name_(std::move(name)),
          family_(family),
          encoding_(encoding),
          arg_bits_(arg_bits),
          value_bits_(value_bits),
          settings_(std::move(settings)),
          solutions_(std::move(solutions)) {
        if (arg_bits_ < 1 || arg_bits_ > 16) {
            throw InvalidArgument("arg_bits must be in [1, 16]");
        }
        if (value_bits_ < 1 || value_bits_ > 16) {
            throw InvalidArgument("value_bits must be in [1, 16]");
        }
        if (encoding_ == SettingEncoding::kronecker && value_bits_ != 1) {
            throw InvalidArgument("kronecker-encoded problems have 1-bit values");
        }
        setting_len_ = encoding_ == SettingEncoding::kronecker ? arg_bits_ : (1 << arg_bits_) * value_bits_;
        if (setting_len_ > 64) {
            throw CapExceeded("setting strings longer than 64 bits are not supported");
        }
        if (settings_.empty()) {
            throw InvalidArgument("problem '" + name_ + "' has no settings");
        }
        if (settings_.size() != solutions_.size()) {
            throw InvalidArgument("settings and solutions differ in length");
        }
        solution_len_ = solutions_.front().width();
        for (size_t i = 0; i < settings_.size(); i++) {
            if (settings_[i].width() != setting_len_) {
                throw InvalidArgument("setting '" + settings_[i].str() + "' does not have " +
                                      std::to_string(setting_len_) + " bits");
            }
            if (solutions_[i].width() != solution_len_) {
                throw InvalidArgument("solution labels must share one width");
            }
        }
        std::vector<size_t> order(settings_.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](size_t x, size_t y) { return settings_[x] < settings_[y]; });
        for (size_t i = 1; i < order.size(); i++) {
            if (settings_[order[i]] == settings_[order[i - 1]]) {
                throw DuplicateSetting("duplicate setting '" + settings_[order[i]].str() + "'");
            }
        }
        sorted_ = order;
        size_t args = arg_count();
        values_.resize(settings_.size() * args);
        for (size_t i = 0; i < settings_.size(); i++) {
            for (uint64_t a = 0; a < args; a++) {
                values_[i * args + a] = raw_eval(settings_[i], a);
            }
        }
        // Distinct settings must give distinct oracles.
        std::vector<size_t> by_table(settings_.size());
        std::iota(by_table.begin(), by_table.end(), 0);
        auto row = [&](size_t i) { return values_.begin() + static_cast<long>(i * args); };
        std::sort(by_table.begin(), by_table.end(), [&](size_t x, size_t y) {
            return std::lexicographical_compare(row(x), row(x) + static_cast<long>(args), row(y),
                                                row(y) + static_cast<long>(args));
        });
        for (size_t i = 1; i < by_table.size(); i++) {
            if (std::equal(row(by_table[i]), row(by_table[i]) + static_cast<long>(args), row(by_table[i - 1]))) {
                throw InvalidArgument("settings '" + settings_[by_table[i]].str() + "' and '" +
                                      settings_[by_table[i - 1]].str() + "' define the same function");
            }
        }
    }

    const std::string& name() const { return name_; }
    ProblemFamily family() const { return family_; }
    SettingEncoding encoding() const { return encoding_; }
    int arg_bits() const { return arg_bits_; }
    int value_bits() const { return value_bits_; }
    int setting_len() const { return setting_len_; }
    int solution_len() const { return solution_len_; }
    size_t arg_count() const { return size_t{1} << arg_bits_; }
    size_t size() const { return settings_.size(); }
    const std::vector<BitString>& settings() const { return settings_; }
    const std::vector<BitString>& solutions() const { return solutions_; }
    const BitString& setting(size_t i) const { return settings_.at(i); }
    const BitString& solution(size_t i) const { return solutions_.at(i); }

    std::optional<size_t> find(const BitString& b) const {
        auto it = std::lower_bound(sorted_.begin(), sorted_.end(), b,
                                   [&](size_t i, const BitString& key) { return settings_[i] < key; });
        if (it != sorted_.end() && settings_[*it] == b) {
            return *it;
        }
        return std::nullopt;
    }

    size_t index_of(const BitString& b) const {
        auto i = find(b);
        if (!i) {
            throw InvalidArgument("setting '" + b.str() + "' is not in the family of problem '" + name_ + "'");
        }
        return *i;
    }

    /// f_b(a) for the setting with index i.
    uint64_t eval_index(size_t i, uint64_t a) const { return values_[i * arg_count() + a]; }

    /// f_b(a); b must belong to σ.
    uint64_t eval(const BitString& b, uint64_t a) const {
        if (a >= arg_count()) {
            throw InvalidArgument("argument outside {0,1}^" + std::to_string(arg_bits_));
        }
        return eval_index(index_of(b), a);
    }

    const BitString& solution_of(const BitString& b) const { return solutions_[index_of(b)]; }

    /// Number of distinct solution labels over all of σ.
    size_t distinct_solutions() const {
        std::vector<BitString> s = solutions_;
        std::sort(s.begin(), s.end());
        return static_cast<size_t>(std::unique(s.begin(), s.end()) - s.begin());
    }

    bool operator==(const OracleProblem& o) const {
        if (name_ != o.name_ || family_ != o.family_ || encoding_ != o.encoding_ || arg_bits_ != o.arg_bits_ ||
            value_bits_ != o.value_bits_ || size() != o.size()) {
            return false;
        }
        for (size_t i = 0; i < size(); i++) {
            auto j = o.find(settings_[i]);
            if (!j || o.solutions_[*j] != solutions_[i]) {
                return false;
            }
        }
        return true;
    }

   private:
    uint64_t raw_eval(const BitString& b, uint64_t a) const {
        if (encoding_ == SettingEncoding::kronecker) {
            return b.value() == a ? 1 : 0;
        }
        return b.slice(static_cast<int>(a) * value_bits_, value_bits_);
    }

    std::string name_;
    ProblemFamily family_;
    SettingEncoding encoding_;
    int arg_bits_;
    int value_bits_;
    int setting_len_ = 0;
    int solution_len_ = 0;
    std::vector<BitString> settings_;
    std::vector<BitString> solutions_;
    std::vector<size_t> sorted_;
    std::vector<uint64_t> values_;
};

namespace detail {

inline BitString table_from_values(const std::vector<uint64_t>& values, int value_bits) {
    uint64_t v = 0;
    for (uint64_t x : values) {
        v = (v << value_bits) | x;
    }
    return BitString(v, static_cast<int>(values.size()) * value_bits);
}

inline void require_range(const char* family, int n, int lo, int hi) {
    std::string msg = std::string(family) + " problems need " + std::to_string(lo) + " <= n <= " +
                      std::to_string(hi) + ", got n = " + std::to_string(n);
    if (n < 1) {
        throw InvalidArgument(msg);
    }
    if (n < lo || n > hi) {
        throw CapExceeded(msg);
    }
}

}  // namespace detail

/// Grover's drawers: σ = {0,1}^n, f_b(a) = δ(b, a), s(b) = b.
inline OracleProblem grover_problem(int n) {
    detail::require_range("grover", n, 1, 10);
    std::vector<BitString> settings;
    for (uint64_t b = 0; b < (uint64_t{1} << n); b++) {
        settings.emplace_back(b, n);
    }
    auto solutions = settings;
    return OracleProblem("grover", ProblemFamily::grover, SettingEncoding::kronecker, n, 1, std::move(settings),
                         std::move(solutions));
}

/// Deutsch-Jozsa: tables of all constant and balanced f : {0,1}^n -> {0,1}.
/// Solution "0" = constant, "1" = balanced.
inline OracleProblem dj_problem(int n) {
    detail::require_range("dj", n, 1, 4);
    int rows = 1 << n;
    std::vector<BitString> settings;
    std::vector<BitString> solutions;
    for (uint64_t t = 0; t < (uint64_t{1} << rows); t++) {
        int w = std::popcount(t);
        if (w == 0 || w == rows) {
            settings.emplace_back(t, rows);
            solutions.emplace_back(0, 1);
        } else if (w == rows / 2) {
            settings.emplace_back(t, rows);
            solutions.emplace_back(1, 1);
        }
    }
    return OracleProblem("dj", ProblemFamily::deutsch_jozsa, SettingEncoding::table, n, 1, std::move(settings),
                         std::move(solutions));
}

/// Simon: tables of all f : {0,1}^n -> {0,1}^(n-1) with f(a) = f(c) iff
/// c ∈ {a, a ⊕ p}, p ≠ 0. Solution p (n bits).
inline OracleProblem simon_problem(int n) {
    detail::require_range("simon", n, 2, 3);
    int w = n - 1;
    uint64_t args = uint64_t{1} << n;
    std::vector<std::pair<BitString, BitString>> found;
    for (uint64_t p = 1; p < args; p++) {
        // Coset representatives of {0, p}: smaller element of each pair.
        std::vector<uint64_t> reps;
        for (uint64_t a = 0; a < args; a++) {
            if (a < (a ^ p)) {
                reps.push_back(a);
            }
        }
        std::vector<uint64_t> assignment(reps.size());
        std::iota(assignment.begin(), assignment.end(), 0);
        do {
            std::vector<uint64_t> values(args);
            for (size_t k = 0; k < reps.size(); k++) {
                values[reps[k]] = assignment[k];
                values[reps[k] ^ p] = assignment[k];
            }
            found.emplace_back(detail::table_from_values(values, w), BitString(p, n));
        } while (std::next_permutation(assignment.begin(), assignment.end()));
    }
    std::sort(found.begin(), found.end());
    std::vector<BitString> settings;
    std::vector<BitString> solutions;
    for (auto& [t, p] : found) {
        settings.push_back(t);
        solutions.push_back(p);
    }
    return OracleProblem("simon", ProblemFamily::simon, SettingEncoding::table, n, w, std::move(settings),
                         std::move(solutions));
}

/// Toy stand-in for the period-finding subroutine: f(a) = (a + t) mod r over
/// a ∈ {0..7}, r ∈ {2, 4}, t ∈ {0..r-1}, values in 2 bits. Solution r (3 bits).
inline OracleProblem periodic_problem(int n) {
    if (n != 3) {
        throw CapExceeded("periodic problems are defined for n = 3 only, got n = " + std::to_string(n));
    }
    std::vector<BitString> settings;
    std::vector<BitString> solutions;
    for (uint64_t r : {2, 4}) {
        for (uint64_t t = 0; t < r; t++) {
            std::vector<uint64_t> values;
            for (uint64_t a = 0; a < 8; a++) {
                values.push_back((a + t) % r);
            }
            settings.push_back(detail::table_from_values(values, 2));
            solutions.emplace_back(r, 3);
        }
    }
    return OracleProblem("periodic", ProblemFamily::periodic, SettingEncoding::table, 3, 2, std::move(settings),
                         std::move(solutions));
}

/// Built-in family by name: grover, dj, simon, periodic.
inline OracleProblem builtin_problem(std::string_view name, int n) {
    if (name == "grover") {
        return grover_problem(n);
    }
    if (name == "dj") {
        return dj_problem(n);
    }
    if (name == "simon") {
        return simon_problem(n);
    }
    if (name == "periodic") {
        return periodic_problem(n);
    }
    throw InvalidArgument("unknown problem family '" + std::string(name) + "' (expected grover, dj, simon, periodic)");
}

// ---------------------------------------------------------------------------
// Problem files (JSON)

inline nlohmann::json problem_to_json(const OracleProblem& p) {
    nlohmann::json settings = nlohmann::json::array();
    const char* key = p.encoding() == SettingEncoding::kronecker ? "setting" : "table";
    for (size_t i = 0; i < p.size(); i++) {
        settings.push_back({{key, p.setting(i).str()}, {"solution", p.solution(i).str()}});
    }
    return {{"name", p.name()},
            {"family", to_string(p.family())},
            {"encoding", to_string(p.encoding())},
            {"arg_bits", p.arg_bits()},
            {"value_bits", p.value_bits()},
            {"settings", settings}};
}

inline OracleProblem problem_from_json(const nlohmann::json& j) {
    auto fail = [](const std::string& field, const std::string& what) -> FormatError {
        return FormatError("field '" + field + "': " + what);
    };
    if (!j.is_object()) {
        throw FormatError("problem file must hold a JSON object");
    }
    auto get_string = [&](const nlohmann::json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) {
            throw fail(path, "missing");
        }
        if (!obj.at(key).is_string()) {
            throw fail(path, "expected a string");
        }
        return obj.at(key).get<std::string>();
    };
    auto get_int = [&](const std::string& key) {
        if (!j.contains(key)) {
            throw fail(key, "missing");
        }
        if (!j.at(key).is_number_integer()) {
            throw fail(key, "expected an integer");
        }
        return j.at(key).get<int>();
    };
    std::string name = get_string(j, "name", "name");
    int arg_bits = get_int("arg_bits");
    int value_bits = get_int("value_bits");
    if (arg_bits < 1 || arg_bits > 6) {
        throw fail("arg_bits", "must be in [1, 6]");
    }
    if (value_bits < 1 || value_bits > 8) {
        throw fail("value_bits", "must be in [1, 8]");
    }
    ProblemFamily family = ProblemFamily::custom;
    if (j.contains("family")) {
        auto f = parse_family(get_string(j, "family", "family"));
        if (!f) {
            throw fail("family", "unknown family '" + j.at("family").get<std::string>() + "'");
        }
        family = *f;
    }
    SettingEncoding encoding = SettingEncoding::table;
    if (j.contains("encoding")) {
        std::string e = get_string(j, "encoding", "encoding");
        if (e == "kronecker") {
            encoding = SettingEncoding::kronecker;
        } else if (e != "table") {
            throw fail("encoding", "expected 'table' or 'kronecker'");
        }
    }
    if (!j.contains("settings") || !j.at("settings").is_array()) {
        throw fail("settings", "expected an array");
    }
    const char* key = encoding == SettingEncoding::kronecker ? "setting" : "table";
    int expected_len = encoding == SettingEncoding::kronecker ? arg_bits : (1 << arg_bits) * value_bits;
    std::vector<BitString> settings;
    std::vector<BitString> solutions;
    const auto& arr = j.at("settings");
    for (size_t i = 0; i < arr.size(); i++) {
        std::string path = "settings[" + std::to_string(i) + "]";
        if (!arr[i].is_object()) {
            throw fail(path, "expected an object");
        }
        std::string table = get_string(arr[i], key, path + "." + key);
        std::string solution = get_string(arr[i], "solution", path + ".solution");
        if (static_cast<int>(table.size()) != expected_len) {
            throw fail(path + "." + key, "length " + std::to_string(table.size()) + ", expected " +
                                             std::to_string(expected_len));
        }
        try {
            settings.push_back(BitString::parse(table));
            solutions.push_back(BitString::parse(solution));
        } catch (const InvalidArgument& e) {
            throw fail(path, e.what());
        }
        if (!solutions.empty() && solutions.back().width() != solutions.front().width()) {
            throw fail(path + ".solution", "width differs from the first solution label");
        }
        for (size_t k = 0; k + 1 < settings.size(); k++) {
            if (settings[k] == settings.back()) {
                throw DuplicateSetting("field '" + path + "." + key + "': duplicate setting '" + table +
                                       "' (first at settings[" + std::to_string(k) + "])");
            }
        }
    }
    try {
        return OracleProblem(name, family, encoding, arg_bits, value_bits, std::move(settings), std::move(solutions));
    } catch (const FormatError&) {
        throw;
    } catch (const Error& e) {
        throw FormatError(e.what());
    }
}

inline void save_problem(const OracleProblem& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw FormatError("cannot open '" + path + "' for writing");
    }
    out << problem_to_json(p).dump(2) << "\n";
}

inline OracleProblem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open '" + path + "'");
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path + ": " + e.what());
    }
    try {
        return problem_from_json(j);
    } catch (const FormatError& e) {
        if (dynamic_cast<const DuplicateSetting*>(&e)) {
            throw DuplicateSetting(path + ": " + e.what());
        }
        throw FormatError(path + ": " + e.what());
    }
}

}  // namespace zol
