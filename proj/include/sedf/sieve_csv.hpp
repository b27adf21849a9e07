#pragma once

// CSV form of sieve reports and of the shipped table fixtures:
//   v,m,k,lambda,status,filter_id,admissible_a
// admissible_a is a semicolon-joined list of a values. Lines starting with '#'
// are comments. In a fixture an empty admissible_a cell means "not checked".

#include "sedf/sieve.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace sedf {

inline constexpr std::string_view kSieveCsvHeader = "v,m,k,lambda,status,filter_id,admissible_a";

struct SieveCsvRow {
    std::uint64_t v = 0, m = 0, k = 0, lambda = 0;
    SieveStatus status = SieveStatus::Survives;
    std::optional<FilterId> filter;
    std::vector<std::uint64_t> admissible;
    std::size_t line = 0;
};

class CsvError : public std::runtime_error {
public:
    CsvError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

inline std::string format_sieve_row(const SieveRow& row) {
    std::string s = std::to_string(row.params.v) + ',' + std::to_string(row.params.m) + ',' +
                    std::to_string(row.params.k) + ',' + std::to_string(row.params.lambda) + ',';
    s += status_name(row.outcome.status);
    s += ',';
    if (row.outcome.filter) s += filter_name(*row.outcome.filter);
    s += ',';
    for (std::size_t i = 0; i < row.outcome.admissible.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(row.outcome.admissible[i].a);
    }
    return s;
}

inline void write_sieve_csv(std::ostream& out, const std::vector<SieveRow>& rows) {
    out << kSieveCsvHeader << '\n';
    for (const auto& row : rows) out << format_sieve_row(row) << '\n';
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::uint64_t parse_u64(const std::string& s, std::size_t line, const char* field) {
    std::uint64_t x = 0;
    const auto t = trim(s);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw CsvError(line, std::string("bad ") + field + " value '" + t + "'");
    return x;
}

} // namespace detail

inline std::vector<SieveCsvRow> read_sieve_csv(std::istream& in) {
    std::vector<SieveCsvRow> rows;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (!header_seen) {
            if (t != kSieveCsvHeader) throw CsvError(lineno, "expected header '" + std::string(kSieveCsvHeader) + "'");
            header_seen = true;
            continue;
        }
        const auto cells = detail::split(t, ',');
        if (cells.size() != 7) throw CsvError(lineno, "expected 7 columns, got " + std::to_string(cells.size()));
        SieveCsvRow r;
        r.line = lineno;
        r.v = detail::parse_u64(cells[0], lineno, "v");
        r.m = detail::parse_u64(cells[1], lineno, "m");
        r.k = detail::parse_u64(cells[2], lineno, "k");
        r.lambda = detail::parse_u64(cells[3], lineno, "lambda");
        const auto st = parse_status(detail::trim(cells[4]));
        if (!st) throw CsvError(lineno, "unknown status '" + cells[4] + "'");
        r.status = *st;
        if (const auto f = detail::trim(cells[5]); !f.empty()) {
            r.filter = parse_filter_id(f);
            if (!r.filter) throw CsvError(lineno, "unknown filter id '" + f + "'");
        }
        if (const auto a = detail::trim(cells[6]); !a.empty())
            for (const auto& x : detail::split(a, ';')) r.admissible.push_back(detail::parse_u64(x, lineno, "a"));
        rows.push_back(std::move(r));
    }
    if (!header_seen) throw CsvError(lineno, "missing header");
    return rows;
}

/// Compares fixture rows against a report. Rows with v above `v_max` are
/// skipped. Returns one message per mismatch; empty means agreement.
inline std::vector<std::string> diff_against_fixture(const std::vector<SieveRow>& report,
                                                     const std::vector<SieveCsvRow>& fixture,
                                                     std::uint64_t v_max) {
    std::map<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>, const SieveRow*> index;
    for (const auto& row : report) index[{row.params.v, row.params.m, row.params.k}] = &row;
    std::vector<std::string> out;
    for (const auto& f : fixture) {
        if (f.v > v_max) continue;
        const auto key = "(" + std::to_string(f.v) + "," + std::to_string(f.m) + "," +
                         std::to_string(f.k) + "," + std::to_string(f.lambda) + ")";
        const auto it = index.find({f.v, f.m, f.k});
        if (it == index.end()) {
            out.push_back(key + ": not a candidate in the report");
            continue;
        }
        const auto& got = *it->second;
        if (got.params.lambda != f.lambda)
            out.push_back(key + ": report has lambda " + std::to_string(got.params.lambda));
        if (got.outcome.status != f.status || got.outcome.filter != f.filter) {
            std::ostringstream msg;
            msg << key << ": expected " << status_name(f.status) << ' '
                << (f.filter ? filter_name(*f.filter) : "-") << ", got " << status_name(got.outcome.status)
                << ' ' << (got.outcome.filter ? filter_name(*got.outcome.filter) : "-");
            out.push_back(msg.str());
        }
        if (!f.admissible.empty()) {
            std::vector<std::uint64_t> got_a;
            for (const auto& a : got.outcome.admissible) got_a.push_back(a.a);
            if (got_a != f.admissible) out.push_back(key + ": admissible a differs");
        }
    }
    return out;
}

} // namespace sedf
