#pragma once

// Plain-text family files:
//
//   # optional comments
//   group: 3,3
//   set: (0,0),(1,2)
//   set: (1,1),(2,0)
//
// One `group:` line listing the cyclic factor orders, then one `set:` line per
// set. Elements are always parenthesized, even in cyclic groups. Whitespace
// between tokens is ignored; residues outside [0, n_i) are reduced with a
// warning.

#include "sedf/family.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sedf {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct ParsedFamily {
    Family family;
    std::vector<std::string> warnings;
};

namespace detail {

class LineCursor {
public:
    LineCursor(const std::string& text, std::size_t line) : s_(text), line_(line) {}

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ == s_.size();
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    std::int64_t integer() {
        skip_ws();
        const auto start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        const auto digits = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == digits) fail("expected an integer");
        try {
            return std::stoll(s_.substr(start, pos_ - start));
        } catch (const std::out_of_range&) {
            fail("integer out of range");
        }
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(line_, what + " at column " + std::to_string(pos_ + 1));
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
    std::size_t line_;
};

} // namespace detail

inline ParsedFamily parse_family(std::istream& in) {
    std::optional<AbelianGroup> group;
    std::vector<std::vector<Element>> sets;
    std::vector<std::string> warnings;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        detail::LineCursor cur(raw, lineno);
        if (cur.at_end()) continue;

        const auto colon = raw.find(':');
        if (colon == std::string::npos) throw ParseError(lineno, "expected 'group:' or 'set:'");
        std::string key = raw.substr(0, colon);
        std::erase_if(key, [](unsigned char c) { return std::isspace(c); });
        const std::string body = raw.substr(colon + 1);
        detail::LineCursor c(body, lineno);

        if (key == "group") {
            if (group) throw ParseError(lineno, "duplicate group line");
            std::vector<std::uint64_t> factors;
            if (!c.at_end()) {
                do {
                    const auto n = c.integer();
                    if (n < 2) throw ParseError(lineno, "cyclic factor orders must be at least 2");
                    factors.push_back(static_cast<std::uint64_t>(n));
                } while (c.accept(','));
            }
            if (!c.at_end()) c.fail("unexpected trailing text");
            try {
                group.emplace(std::move(factors));
            } catch (const std::exception& e) {
                throw ParseError(lineno, e.what());
            }
        } else if (key == "set") {
            if (!group) throw ParseError(lineno, "set line before the group line");
            auto& set = sets.emplace_back();
            do {
                c.expect('(');
                std::vector<std::int64_t> coords;
                if (!c.accept(')')) {
                    do coords.push_back(c.integer());
                    while (c.accept(','));
                    c.expect(')');
                }
                if (coords.size() != group->rank())
                    throw ParseError(lineno, "element has " + std::to_string(coords.size()) +
                                                 " coordinates, group has rank " +
                                                 std::to_string(group->rank()));
                auto g = group->element(coords);
                for (std::size_t i = 0; i < coords.size(); ++i) {
                    if (coords[i] < 0 || static_cast<std::uint64_t>(coords[i]) >= group->factors()[i]) {
                        warnings.push_back("line " + std::to_string(lineno) + ": residue " +
                                           std::to_string(coords[i]) + " reduced mod " +
                                           std::to_string(group->factors()[i]));
                    }
                }
                set.push_back(std::move(g));
            } while (c.accept(','));
            if (!c.at_end()) c.fail("unexpected trailing text");
        } else {
            throw ParseError(lineno, "unknown key '" + key + "'");
        }
    }
    if (!group) throw ParseError(lineno, "missing group line");
    return ParsedFamily{Family(std::move(*group), std::move(sets)), std::move(warnings)};
}

inline ParsedFamily parse_family(const std::string& text) {
    std::istringstream in(text);
    return parse_family(in);
}

inline ParsedFamily load_family(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_family(in);
}

inline std::string serialize_family(const Family& fam) {
    std::string out = "group: ";
    const auto& f = fam.group().factors();
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(f[i]);
    }
    out += '\n';
    for (const auto& set : fam.sets()) {
        out += "set: ";
        for (std::size_t i = 0; i < set.size(); ++i) {
            if (i) out += ',';
            out += to_string(set[i]);
        }
        out += '\n';
    }
    return out;
}

} // namespace sedf
