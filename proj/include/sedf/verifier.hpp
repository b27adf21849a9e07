#pragma once

// SEDF verification.
//
// The accept/reject decision comes from integer difference tallies only. The
// character profile is a second, diagnostic pass in exact cyclotomic
// arithmetic; it cross-checks the identities that the nonprincipal character
// values of a genuine SEDF must satisfy.

#include "sedf/cyclotomic.hpp"
#include "sedf/family.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sedf {

/// lambda = (m-1)k^2 / (v-1) when that is a positive integer.
inline std::optional<std::uint64_t> expected_lambda(std::uint64_t v, std::uint64_t m,
                                                    std::uint64_t k) {
    if (v < 2 || m < 1) return std::nullopt;
    const auto num = static_cast<unsigned __int128>(m - 1) * k * k;
    if (num == 0 || num % (v - 1) != 0) return std::nullopt;
    return static_cast<std::uint64_t>(num / (v - 1));
}

/// tally[g] = #{(x, y) : x in D_j, y in D \ D_j, x - y = g}, indexed by element index.
inline std::vector<std::uint64_t> external_tally(const Family& fam, std::size_t j) {
    if (j >= fam.m()) throw std::out_of_range("external_tally: set index out of range");
    const auto& G = fam.group();
    std::vector<std::uint64_t> tally(G.order(), 0);
    for (std::size_t i = 0; i < fam.m(); ++i) {
        if (i == j) continue;
        for (auto x : fam.indices(j))
            for (auto y : fam.indices(i)) ++tally[G.sub_index(x, y)];
    }
    return tally;
}

/// Coefficients of D_i D_i^(-1) by direct convolution.
inline std::vector<std::int64_t> difference_tally(const Family& fam, std::size_t i) {
    const auto& G = fam.group();
    std::vector<std::int64_t> out(G.order(), 0);
    for (auto x : fam.indices(i))
        for (auto y : fam.indices(i)) ++out[G.sub_index(x, y)];
    return out;
}

struct Witness {
    std::size_t set = 0; // 0-based
    Element element;
    std::uint64_t count = 0;
};

struct CharacterEntry {
    enum class Class { Zero, Nonzero };

    Character chi;
    Class cls = Class::Nonzero;
    std::optional<std::int64_t> norm_d;              // |chi(D)|^2 when rational
    std::vector<std::optional<std::int64_t>> values; // |chi(D_i)|^2 when rational
    std::optional<std::int64_t> a_chi;
    std::optional<std::size_t> ell_chi;
    std::optional<bool> product_identity; // chi(D_j)(conj chi(D) - conj chi(D_j)) == -lambda for all j
};

struct CharacterProfile {
    std::optional<std::uint64_t> lambda;
    std::vector<CharacterEntry> entries; // nonprincipal characters in index order
    std::vector<std::string> violations;

    std::size_t count(CharacterEntry::Class c) const {
        return static_cast<std::size_t>(std::count_if(
            entries.begin(), entries.end(), [c](const auto& e) { return e.cls == c; }));
    }
};

struct VerifyReport {
    bool is_sedf = false;
    std::optional<std::uint64_t> lambda;
    std::optional<Witness> witness;
    std::optional<CharacterProfile> profile;
};

namespace detail {

inline std::optional<std::int64_t> small(const std::optional<Integer>& x) {
    if (!x) return std::nullopt;
    return x->convert_to<std::int64_t>();
}

// chi(D_i) for one character, for every set.
inline std::vector<Cyclotomic> character_sums(const Family& fam, const Character& chi) {
    const auto& G = fam.group();
    std::vector<Cyclotomic> out;
    out.reserve(fam.m());
    std::vector<std::uint64_t> idx;
    for (const auto& set : fam.sets()) {
        idx.clear();
        for (const auto& g : set) idx.push_back(G.char_eval_index(chi, g));
        out.push_back(Cyclotomic::from_indices(G.exponent(), idx));
    }
    return out;
}

inline Cyclotomic total(const std::vector<Cyclotomic>& parts) {
    Cyclotomic sum(parts.front().n());
    for (const auto& p : parts) sum += p;
    return sum;
}

inline std::string chi_name(const Character& chi) { return "chi" + to_string(Element{chi.exps}); }

} // namespace detail

/// Definition-first check. On rejection the witness is the first (set, element)
/// in index order whose tally exceeds floor((m-1)k^2 / (v-1)); since the tallies
/// of each set sum to (m-1)k^2 over the v-1 nonidentity elements, any
/// non-constant or non-integral case has such an overcount.
inline VerifyReport verify_sedf(const Family& fam) {
    VerifyReport report;
    const auto& G = fam.group();
    const auto v = fam.v();
    const auto total = static_cast<unsigned __int128>(fam.m() - 1) * fam.k() * fam.k();
    const auto threshold = static_cast<std::uint64_t>(total / (v - 1));
    const auto lambda = expected_lambda(v, fam.m(), fam.k());
    for (std::size_t j = 0; j < fam.m(); ++j) {
        const auto tally = external_tally(fam, j);
        for (std::uint64_t g = 1; g < v; ++g) {
            if (tally[g] > threshold) {
                report.witness = Witness{j, G.element_at(g), tally[g]};
                return report;
            }
        }
    }
    report.is_sedf = lambda.has_value();
    report.lambda = lambda;
    return report;
}

/// The character form of the definition: lambda from (m-1)k^2 = lambda(v-1) is a
/// positive integer and chi(D_j)(conj chi(D) - conj chi(D_j)) = -lambda holds in
/// Z[zeta_N] for every set and every nonprincipal character.
inline bool character_criterion(const Family& fam) {
    const auto lambda = expected_lambda(fam.v(), fam.m(), fam.k());
    if (!lambda) return false;
    const auto& G = fam.group();
    const auto target = Cyclotomic::from_integer(G.exponent(), -Integer(*lambda));
    for (std::uint64_t c = 1; c < G.order(); ++c) {
        const auto sums = detail::character_sums(fam, G.character_at(c));
        const auto whole_conj = detail::total(sums).conj();
        for (const auto& part : sums)
            if (!(part * (whole_conj - part.conj()) == target)) return false;
    }
    return true;
}

/// Per-character profile. For a verified SEDF (lambda known) every identity the
/// character values must satisfy is checked and failures land in `violations`;
/// for other inputs only the raw norms are reported.
inline CharacterProfile char_profile(const Family& fam) {
    using Class = CharacterEntry::Class;
    const auto& G = fam.group();
    const auto m = static_cast<std::int64_t>(fam.m());
    CharacterProfile prof;
    const auto report = verify_sedf(fam);
    if (report.is_sedf) prof.lambda = report.lambda;
    const std::int64_t lam = prof.lambda ? static_cast<std::int64_t>(*prof.lambda) : 0;

    for (std::uint64_t c = 1; c < G.order(); ++c) {
        CharacterEntry e;
        e.chi = G.character_at(c);
        const auto sums = detail::character_sums(fam, e.chi);
        const auto whole = detail::total(sums);
        e.cls = whole.is_zero() ? Class::Zero : Class::Nonzero;
        e.norm_d = detail::small(whole.norm_sq().as_integer());
        for (const auto& s : sums) e.values.push_back(detail::small(s.norm_sq().as_integer()));

        const bool all_rational =
            std::all_of(e.values.begin(), e.values.end(), [](const auto& x) { return x.has_value(); });
        if (all_rational) {
            std::int64_t a = *e.values.front();
            for (const auto& x : e.values) a = std::min(a, *x);
            e.a_chi = a;
            e.ell_chi = static_cast<std::size_t>(
                std::count_if(e.values.begin(), e.values.end(), [a](const auto& x) { return *x == a; }));
        }

        if (prof.lambda) {
            const auto name = detail::chi_name(e.chi);
            auto fail = [&](const std::string& what) { prof.violations.push_back(name + ": " + what); };

            const auto target = Cyclotomic::from_integer(G.exponent(), -Integer(lam));
            const auto whole_conj = whole.conj();
            e.product_identity = std::all_of(sums.begin(), sums.end(), [&](const Cyclotomic& part) {
                return part * (whole_conj - part.conj()) == target;
            });
            if (!*e.product_identity) fail("chi(D_j)(conj chi(D) - conj chi(D_j)) != -lambda");

            if (e.cls == Class::Zero) {
                for (std::size_t i = 0; i < e.values.size(); ++i)
                    if (e.values[i] != lam)
                        fail("chi(D) = 0 but |chi(D_" + std::to_string(i + 1) + ")|^2 != lambda");
            } else if (m > 2) {
                if (!all_rational) {
                    fail("non-integral |chi(D_i)|^2");
                } else {
                    const auto a = *e.a_chi;
                    const auto L = lam;
                    const auto ell = static_cast<std::int64_t>(*e.ell_chi);
                    const auto d = std::gcd(L, a);
                    if (a <= 0 || a >= L) fail("a_chi not in [1, lambda)");
                    if (a > 0 && (L * L) % a != 0) fail("a_chi does not divide lambda^2");
                    if (a > 0 && (d * d) % a != 0) fail("a_chi does not divide gcd(lambda, a_chi)^2");
                    for (const auto& x : e.values)
                        if (*x != a && (a <= 0 || *x * a != L * L))
                            fail("|chi(D_i)|^2 = " + std::to_string(*x) + " not in {a_chi, lambda^2/a_chi}");
                    if (!(2 * ell > m && ell <= m - 2)) fail("ell_chi outside (m/2, m-2]");
                    if ((ell - 1) * (L + a) != L * (m - 2)) fail("(ell-1)(lambda+a) != lambda(m-2)");
                    if ((m - ell - 1) * (L + a) != a * (m - 2)) fail("(m-ell-1)(lambda+a) != a(m-2)");
                    if (((m - 2) * d) % (L + a) != 0) fail("lambda+a does not divide (m-2)gcd(lambda,a)");
                }
            }
        }
        prof.entries.push_back(std::move(e));
    }
    return prof;
}

/// Reconstructs the coefficients of D_i D_i^(-1) from its character values
/// |chi(D_i)|^2 by Fourier inversion, exactly.
inline std::vector<std::int64_t> fourier_roundtrip(const Family& fam, std::size_t i) {
    if (i >= fam.m()) throw std::out_of_range("fourier_roundtrip: set index out of range");
    const auto& G = fam.group();
    const auto v = G.order();
    const auto N = G.exponent();

    std::vector<Character> chars = all_characters(G);
    std::vector<Cyclotomic> values;
    values.reserve(v);
    for (const auto& chi : chars) {
        std::vector<std::uint64_t> idx;
        for (auto x : fam.indices(i)) idx.push_back(G.char_eval_index(chi, G.element_at(x)));
        values.push_back(Cyclotomic::from_indices(N, idx).norm_sq());
    }

    std::vector<Element> elements;
    elements.reserve(v);
    for (std::uint64_t g = 0; g < v; ++g) elements.push_back(G.element_at(g));

    std::vector<std::int64_t> out(v);
    for (std::uint64_t g = 0; g < v; ++g) {
        // sum over chi of chi(X) * chi(g)^(-1)
        std::vector<Integer> acc(N);
        for (std::uint64_t c = 0; c < v; ++c) {
            const auto j = G.char_eval_index(chars[c], elements[g]);
            values[c].accumulate_rotated(acc, (N - j) % N);
        }
        const auto sum = Cyclotomic(N, std::move(acc)).as_integer();
        if (!sum || *sum % v != 0)
            throw std::logic_error("Fourier inversion produced a non-integral coefficient");
        out[g] = (*sum / v).convert_to<std::int64_t>();
    }
    return out;
}

/// True when the coefficient vector (indexed by element index) is constant on
/// every rational-conjugacy class.
inline bool is_orbit_constant(const AbelianGroup& G, const std::vector<std::int64_t>& coeffs) {
    for (std::uint64_t g = 0; g < G.order(); ++g)
        for (const auto& h : orbit(G, G.element_at(g)))
            if (coeffs[G.index_of(h)] != coeffs[g]) return false;
    return true;
}

} // namespace sedf
