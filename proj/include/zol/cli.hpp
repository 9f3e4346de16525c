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

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "zol/error.hpp"
#include "zol/report.hpp"

namespace zol {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitUsage = 2,
    kExitCap = 3,
    kExitFormat = 4,
};

namespace detail {

struct ProblemArgs {
    std::string name;
    int n = 0;
    std::string file;
    std::string algorithm;
};

struct CommonArgs {
    std::string format = "text";
    std::string output;
};

inline void add_problem_options(CLI::App* sub, ProblemArgs& a) {
    auto* name = sub->add_option("--problem", a.name, "built-in family: grover, dj, simon, periodic");
    auto* n = sub->add_option("--n", a.n, "argument width of the built-in family");
    auto* file = sub->add_option("--file", a.file, "problem file (JSON)");
    name->excludes(file);
    n->needs(name);
    file->excludes(name);
}

inline void add_common_options(CLI::App* sub, CommonArgs& c) {
    sub->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--output", c.output, "write the report to this file");
}

inline OracleProblem select_problem(const ProblemArgs& a) {
    if (!a.file.empty()) {
        return load_problem(a.file);
    }
    if (a.name.empty()) {
        throw InvalidArgument("one of --problem or --file is required");
    }
    if (a.n == 0) {
        throw InvalidArgument("--n is required with --problem");
    }
    return builtin_problem(a.name, a.n);
}

inline AlgorithmKind select_kind(const OracleProblem& p, const std::string& name) {
    if (name.empty()) {
        return default_kind(p);
    }
    auto k = parse_kind(name);
    if (!k) {
        throw InvalidArgument("unknown algorithm '" + name + "' (expected grover, dj, simon)");
    }
    return *k;
}

/// A named setting, or a seeded uniform pick when `text` is empty or "random".
inline BitString select_setting(const OracleProblem& p, const std::string& text, uint64_t seed) {
    if (text.empty() || text == "random") {
        Rng rng(seed);
        auto i = static_cast<size_t>(rng.uniform() * static_cast<double>(p.size()));
        return p.setting(std::min(i, p.size() - 1));
    }
    BitString b = BitString::parse(text);
    p.index_of(b);
    return b;
}

inline CandidateSet select_candidates(const OracleProblem& p, const std::string& text) {
    if (text.empty()) {
        return all_settings(p);
    }
    std::vector<BitString> members;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        members.push_back(BitString::parse(item));
    }
    return candidates_from(p, members);
}

inline void emit(const json& report, const CommonArgs& c, std::ostream& out) {
    std::string text = c.format == "json" ? report.dump(2) + "\n" : render_text(report);
    if (c.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.output, std::ios::binary);
    if (!f) {
        throw FormatError("cannot write '" + c.output + "'");
    }
    f << text;
}

}  // namespace detail

/// Parses and runs one command. Diagnostics go to `err` as a single line.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"zol: setter/solver oracle algorithm simulator and query-count analysis", "zol"};
    app.require_subcommand(1);
    app.allow_extras(false);

    detail::ProblemArgs prob;
    detail::CommonArgs common;
    std::string b_text;
    std::string candidates;
    uint64_t seed = 1;
    bool partitions = false;
    bool coordinate_only = false;

    auto* simulate = app.add_subcommand("simulate", "run the setter/solver protocol once");
    detail::add_problem_options(simulate, prob);
    detail::add_common_options(simulate, common);
    simulate->add_option("--b", b_text, "problem setting, or 'random'");
    simulate->add_option("--seed", seed, "seed for random choices");
    simulate->add_option("--algorithm", prob.algorithm, "grover, dj or simon");

    auto* zigzag = app.add_subcommand("zigzag", "time-symmetrization instances at one setting");
    detail::add_problem_options(zigzag, prob);
    detail::add_common_options(zigzag, common);
    zigzag->add_option("--b", b_text, "problem setting, or 'random'");
    zigzag->add_option("--seed", seed, "seed for a random setting");
    zigzag->add_option("--algorithm", prob.algorithm, "grover, dj or simon");
    zigzag->add_flag("--exhaustive-partitions", partitions, "also list subset splits of σ (experimental, |σ| <= 8)");
    zigzag->add_flag("--coordinate-only", coordinate_only, "search coordinate measurements only");

    auto* ak = app.add_subcommand("ak-report", "predicted query count from the advanced-knowledge rule");
    detail::add_problem_options(ak, prob);
    detail::add_common_options(ak, common);
    ak->add_flag("--coordinate-only", coordinate_only, "search coordinate measurements only");

    auto* complexity = app.add_subcommand("complexity", "classical query complexity and a witness tree");
    detail::add_problem_options(complexity, prob);
    detail::add_common_options(complexity, common);
    complexity->add_option("--candidates", candidates, "comma-separated settings (default: all)");

    auto* list = app.add_subcommand("list-problems", "built-in problem families");
    detail::add_common_options(list, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        err << "zol: " << (msg.empty() ? "usage error" : msg) << "\n";
        return kExitUsage;
    }

    try {
        HalvingOptions halving;
        halving.coordinate_only = coordinate_only;
        json report;
        if (list->parsed()) {
            report = list_problems_report();
        } else {
            OracleProblem p = detail::select_problem(prob);
            if (simulate->parsed()) {
                auto kind = detail::select_kind(p, prob.algorithm);
                std::optional<BitString> b;
                if (!b_text.empty() && b_text != "random") {
                    b = BitString::parse(b_text);
                }
                report = simulate_report(p, kind, b, seed);
            } else if (zigzag->parsed()) {
                auto kind = detail::select_kind(p, prob.algorithm);
                report = zigzag_report(p, kind, detail::select_setting(p, b_text, seed), partitions, halving);
            } else if (ak->parsed()) {
                AkOptions options;
                options.halving = halving;
                report = ak_report_json(p, ak_query_count(p, options));
            } else {
                report = complexity_report(p, detail::select_candidates(p, candidates));
            }
        }
        detail::emit(report, common, out);
        return kExitOk;
    } catch (const CapExceeded& e) {
        err << "zol: cap exceeded: " << e.what() << "\n";
        return kExitCap;
    } catch (const FormatError& e) {
        err << "zol: " << e.what() << "\n";
        return kExitFormat;
    } catch (const InvalidArgument& e) {
        err << "zol: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "zol: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace zol
