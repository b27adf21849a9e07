#pragma once

// Command implementations behind the `sedf` tool. Each command writes its
// report to `out`, diagnostics to `err`, and returns the process exit code.
//
//   verify  0 = SEDF, 1 = not an SEDF, 2 = malformed input
//   sieve   0 = ok (fixtures agree), 1 = fixture mismatch, 2 = usage/cap/I-O error
//   primesearch, search
//           0 = ok, 2 = usage error; search returns 3 when a budget ran out

#include "sedf/family_io.hpp"
#include "sedf/prime_search.hpp"
#include "sedf/search.hpp"
#include "sedf/sieve.hpp"
#include "sedf/sieve_csv.hpp"
#include "sedf/verifier.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

namespace sedf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNo = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

namespace detail {

inline std::string params_string(const Family& fam) {
    return std::to_string(fam.v()) + "," + std::to_string(fam.m()) + "," + std::to_string(fam.k());
}

inline std::string opt_string(const std::optional<std::int64_t>& x) { return x ? std::to_string(*x) : "-"; }

inline void print_profile(const CharacterProfile& prof, bool csv, std::ostream& out) {
    if (csv) {
        out << "chi,order,class,norm_d,norms,a_chi,ell_chi,product_identity\n";
    } else {
        out << "character profile (" << prof.entries.size() << " nonprincipal characters, "
            << prof.count(CharacterEntry::Class::Zero) << " with chi(D) = 0)\n";
    }
    for (const auto& e : prof.entries) {
        std::string norms;
        for (std::size_t i = 0; i < e.values.size(); ++i) {
            if (i) norms += ';';
            norms += opt_string(e.values[i]);
        }
        const std::string cls = e.cls == CharacterEntry::Class::Zero ? "zero" : "nonzero";
        const std::string ident = !e.product_identity ? "-" : (*e.product_identity ? "yes" : "no");
        const std::string ell = e.ell_chi ? std::to_string(*e.ell_chi) : "-";
        if (csv) {
            out << '"' << to_string(Element{e.chi.exps}) << "\"," << e.chi.order << ',' << cls << ','
                << opt_string(e.norm_d) << ',' << norms << ',' << opt_string(e.a_chi) << ','
                << ell << ',' << ident << '\n';
        } else {
            out << "  chi" << to_string(Element{e.chi.exps}) << " order " << e.chi.order << ": " << cls
                << ", |chi(D)|^2 = " << opt_string(e.norm_d) << ", |chi(D_i)|^2 = " << norms
                << ", a = " << opt_string(e.a_chi) << ", l = " << ell
                << ", product identity: " << ident << '\n';
        }
    }
    if (!csv) {
        if (prof.violations.empty())
            out << (prof.lambda ? "all character identities hold\n" : "identities not checked (not an SEDF)\n");
        for (const auto& v : prof.violations) out << "  violation: " << v << '\n';
    }
}

} // namespace detail

inline int cmd_verify(const std::string& path, bool profile, bool csv, std::ostream& out, std::ostream& err) {
    std::optional<ParsedFamily> parsed;
    try {
        parsed.emplace(load_family(path));
    } catch (const std::exception& e) {
        err << "error: " << path << ": " << e.what() << '\n';
        return kExitUsage;
    }
    for (const auto& w : parsed->warnings) err << "warning: " << w << '\n';
    const auto& fam = parsed->family;
    const auto report = verify_sedf(fam);

    if (csv) {
        out << "v,m,k,lambda,sedf,witness_set,witness_element,witness_count\n";
        const auto lam = expected_lambda(fam.v(), fam.m(), fam.k());
        out << detail::params_string(fam) << ',' << (lam ? std::to_string(*lam) : "")
            << ',' << (report.is_sedf ? "yes" : "no") << ',';
        if (report.witness)
            out << report.witness->set + 1 << ",\"" << to_string(report.witness->element) << "\","
                << report.witness->count;
        else
            out << ",,";
        out << '\n';
    } else if (report.is_sedf) {
        out << "SEDF(" << detail::params_string(fam) << ',' << *report.lambda << ")\n";
        if (fam.m() > 2)
            if (const auto note = group_advisory(fam.group()))
                out << "note: " << to_string(fam.group()) << " is a " << *note
                    << ", where no SEDF with m > 2 is expected\n";
    } else {
        out << "NOT SEDF (v,m,k) = (" << detail::params_string(fam) << ")";
        if (const auto lam = expected_lambda(fam.v(), fam.m(), fam.k()))
            out << ", lambda would be " << *lam;
        else
            out << ", (m-1)k^2/(v-1) is not an integer";
        out << '\n';
        if (report.witness)
            out << "witness: set " << report.witness->set + 1 << ", element "
                << to_string(report.witness->element) << " occurs " << report.witness->count
                << " times as an external difference\n";
    }
    if (profile) detail::print_profile(char_profile(fam), csv, out);
    return report.is_sedf ? kExitOk : kExitNo;
}

struct SieveArgs {
    std::uint64_t v_max = 10000;
    std::optional<std::string> fixtures_dir;
    std::optional<std::string> out_path;
    std::uint64_t cap = 100000;
    unsigned threads = 0;
};

inline int cmd_sieve(const SieveArgs& args, std::ostream& out, std::ostream& err) {
    std::vector<SieveRow> rows;
    try {
        rows = sieve_report(args.v_max, SieveOptions{args.cap, args.threads});
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (args.out_path) {
        std::ofstream f(*args.out_path);
        if (!f) {
            err << "error: cannot write " << *args.out_path << '\n';
            return kExitUsage;
        }
        write_sieve_csv(f, rows);
    } else {
        write_sieve_csv(out, rows);
    }
    if (!args.fixtures_dir) return kExitOk;

    std::size_t checked = 0;
    std::vector<std::string> mismatches;
    for (const char* name : {"table1.csv", "table2.csv", "table3.csv"}) {
        const auto path = std::filesystem::path(*args.fixtures_dir) / name;
        std::ifstream f(path);
        if (!f) {
            err << "error: cannot read " << path.string() << '\n';
            return kExitUsage;
        }
        try {
            const auto fixture = read_sieve_csv(f);
            for (const auto& r : fixture) checked += r.v <= args.v_max;
            for (auto& m : diff_against_fixture(rows, fixture, args.v_max))
                mismatches.push_back(path.filename().string() + " " + m);
        } catch (const CsvError& e) {
            err << "error: " << path.string() << ": " << e.what() << '\n';
            return kExitUsage;
        }
    }
    for (const auto& m : mismatches) err << "mismatch: " << m << '\n';
    err << "fixtures: " << checked << " rows checked, " << mismatches.size() << " mismatches\n";
    return mismatches.empty() ? kExitOk : kExitNo;
}

inline int cmd_primesearch(std::uint64_t bound, std::uint64_t brute_s_max, std::ostream& out, std::ostream& err) {
    if (bound > static_cast<std::uint64_t>(INT64_MAX)) {
        err << "error: --bound must be at most 2^63 - 1\n";
        return kExitUsage;
    }
    if (brute_s_max > 0) {
        const auto brute = pell_brute_force(brute_s_max);
        const auto chain = pell_chain(Integer(brute_s_max) * 4); // p >= s, so this covers s <= s_max
        std::vector<PellSolution> expect;
        for (const auto& s : chain)
            if (s.s <= brute_s_max) expect.push_back(s);
        out << "brute force s <= " << brute_s_max << ": " << brute.size() << " solutions, "
            << (brute == expect ? "identical to the recurrence" : "DIFFERS from the recurrence") << '\n';
        if (brute != expect) return kExitNo;
    }

    out << "p,s,prime,verdict,surviving_m\n";
    std::size_t candidates = 0, open = 0;
    std::vector<P3Candidate> detail;
    for (const auto& sol : pell_chain(Integer(bound))) {
        const auto p = sol.p().convert_to<std::uint64_t>();
        const auto s = sol.s.convert_to<std::uint64_t>();
        out << p << ',' << s << ',';
        if (!is_prime(p)) {
            out << "no,,\n";
            continue;
        }
        ++candidates;
        auto c = p3_pipeline(p, s);
        open += c.verdict == P3Verdict::Open;
        out << "yes," << to_string(c.verdict) << ',';
        for (std::size_t i = 0; i < c.surviving_m.size(); ++i) out << (i ? ";" : "") << c.surviving_m[i];
        out << '\n';
        detail.push_back(std::move(c));
    }
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    for (const auto& c : detail) {
        out << "# p=" << c.p << ": p = 1 mod 12: " << yn(c.p_mod_12) << '\n';
        for (const auto& st : c.stages) {
            out << "#   m=" << st.m << " k=" << st.k << " lambda=" << st.lambda;
            if (st.a_integral) out << " a=" << st.a;
            out << " | a integral: " << yn(st.a_integral) << ", lambda<k<2lambda: " << yn(st.k_bounds)
                << ", mk<=p^3: " << yn(st.fits) << ", (p-1)|(k^2-k): " << yn(st.k_sq_minus_k) << '\n';
        }
    }
    out << "candidate primes: " << candidates << ", eliminated: " << candidates - open << ", open: " << open
        << '\n';
    return kExitOk;
}

struct SearchArgs {
    std::vector<std::uint64_t> group;
    std::uint64_t m = 0, k = 0;
    bool all = false;
    std::optional<std::string> out_dir;
    bool no_prune = false;
    SearchLimits limits;
    unsigned threads = 0;
};

inline int cmd_search(const SearchArgs& args, std::ostream& out, std::ostream& err) {
    std::optional<AbelianGroup> G;
    try {
        G.emplace(args.group);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (!args.all && (args.m < 2 || args.k < 1)) {
        err << "error: give --m (>= 2) and --k (>= 1), or --all\n";
        return kExitUsage;
    }
    SearchOptions opts;
    opts.prune = !args.no_prune;
    opts.threads = args.threads;

    std::vector<SearchAllEntry> entries;
    try {
        if (args.all) {
            entries = search_all(*G, args.limits, opts);
        } else {
            auto spec = make_search_spec(*G, args.m, args.k, args.limits, opts);
            auto res = exhaustive_search(spec);
            entries.push_back({std::move(spec), std::move(res)});
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    if (args.out_dir) std::filesystem::create_directories(*args.out_dir);
    bool budget = false;
    for (const auto& [spec, res] : entries) {
        const auto v = spec.group.order();
        out << to_string(spec.group) << " (v,m,k) = (" << v << ',' << spec.m << ',' << spec.k << ") lambda = ";
        if (spec.lambda)
            out << *spec.lambda;
        else
            out << "non-integral";
        out << ": " << to_string(res.status);
        if (res.status == SearchStatus::Found)
            out << ' ' << res.families.size() << (res.truncated ? "+" : "") << " families";
        out << ", " << res.nodes << " nodes\n";
        budget |= res.status == SearchStatus::BudgetExceeded;
        for (std::size_t i = 0; i < res.families.size(); ++i) {
            const auto text = serialize_family(res.families[i]);
            if (args.out_dir) {
                const auto name = "sedf_" + std::to_string(v) + "_" + std::to_string(spec.m) + "_" +
                                  std::to_string(spec.k) + "_" + std::to_string(i + 1) + ".txt";
                const auto path = std::filesystem::path(*args.out_dir) / name;
                std::ofstream f(path);
                if (!f) {
                    err << "error: cannot write " << path.string() << '\n';
                    return kExitUsage;
                }
                f << text;
            } else {
                out << text;
            }
        }
    }
    return budget ? kExitBudget : kExitOk;
}

/// Parses argv and dispatches; `argv[0]` is the program name.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"Strong external difference family toolkit"};
    app.require_subcommand(1);

    std::string family_path;
    bool profile = false, csv = false;
    auto* verify = app.add_subcommand("verify", "check whether a family file is an SEDF");
    verify->add_option("file", family_path, "family file")->required();
    verify->add_flag("--profile", profile, "print the character profile");
    verify->add_flag("--csv", csv, "machine-readable output");

    std::string chars_path;
    bool chars_csv = false;
    auto* chars = app.add_subcommand("chars", "alias for verify --profile");
    chars->add_option("file", chars_path, "family file")->required();
    chars->add_flag("--csv", chars_csv, "machine-readable output");

    SieveArgs sieve_args;
    std::string fixtures, sieve_out;
    auto* sieve = app.add_subcommand("sieve", "run the parameter filters up to --vmax");
    sieve->add_option("--vmax", sieve_args.v_max, "largest group order")->capture_default_str();
    sieve->add_option("--fixtures", fixtures, "directory with table1.csv, table2.csv, table3.csv");
    sieve->add_option("--out", sieve_out, "write the CSV report here instead of stdout");
    sieve->add_option("--cap", sieve_args.cap, "refuse --vmax above this")->capture_default_str();
    sieve->add_option("--threads", sieve_args.threads, "worker threads (0: automatic)");

    std::uint64_t bound = 3'000'000'000'000ULL, brute = 0;
    auto* prime = app.add_subcommand("primesearch", "Pell-chain prime search for the C_p^3 case");
    prime->add_option("--bound", bound, "largest p")->capture_default_str();
    prime->add_option("--brute", brute, "also cross-check the chain by brute force over s <= N");

    SearchArgs search_args;
    std::string group_list, search_out;
    double seconds = 600;
    auto* search = app.add_subcommand("search", "exhaustive SEDF search in a small abelian group");
    search->add_option("--group", group_list, "cyclic factor orders, e.g. 3,3")->required();
    auto* m_opt = search->add_option("--m", search_args.m, "number of sets");
    auto* k_opt = search->add_option("--k", search_args.k, "set size");
    auto* all_opt = search->add_flag("--all", search_args.all, "every (m,k) with integral lambda");
    all_opt->excludes(m_opt)->excludes(k_opt);
    search->add_option("--out", search_out, "directory for family files");
    search->add_flag("--no-prune", search_args.no_prune, "disable pruning (cross-check)");
    search->add_option("--max-solutions", search_args.limits.max_solutions, "0 for no limit")
        ->capture_default_str();
    search->add_option("--node-budget", search_args.limits.node_budget)->capture_default_str();
    search->add_option("--time-budget", seconds, "seconds")->capture_default_str();
    search->add_option("--threads", search_args.threads, "worker threads (0: automatic)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    if (*verify) return cmd_verify(family_path, profile, csv, out, err);
    if (*chars) return cmd_verify(chars_path, true, chars_csv, out, err);
    if (*sieve) {
        if (!fixtures.empty()) sieve_args.fixtures_dir = fixtures;
        if (!sieve_out.empty()) sieve_args.out_path = sieve_out;
        return cmd_sieve(sieve_args, out, err);
    }
    if (*prime) return cmd_primesearch(bound, brute, out, err);
    if (*search) {
        try {
            for (const auto& part : detail::split(group_list, ',')) {
                const auto t = detail::trim(part);
                if (!t.empty()) search_args.group.push_back(std::stoull(t));
            }
        } catch (const std::exception&) {
            err << "error: bad --group list '" << group_list << "'\n\n" << search->help();
            return kExitUsage;
        }
        if (!search_out.empty()) search_args.out_dir = search_out;
        search_args.limits.time_budget =
            std::chrono::milliseconds(static_cast<std::int64_t>(seconds * 1000));
        if (!search_args.all && (m_opt->count() == 0 || k_opt->count() == 0)) {
            err << "error: give --m and --k, or --all\n\n" << search->help();
            return kExitUsage;
        }
        return cmd_search(search_args, out, err);
    }
    return kExitUsage;
}

} // namespace sedf
