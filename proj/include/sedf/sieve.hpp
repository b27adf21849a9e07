#pragma once

// Parameter sieve for (v, m, k, lambda)-SEDFs with m > 2.
//
// Candidates are the integral solutions of (m-1)k^2 = lambda(v-1). Each one is
// run through a fixed catalogue of nonexistence filters and the first filter
// that fires is reported. Candidates that pass everything are SURVIVES, or
// OPEN_P3 when v = p^3 and every necessary condition for C_p^3 holds.

#include "sedf/arith.hpp"
#include "sedf/group.hpp"
#include "sedf/parallel.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace sedf {

struct ParamSet {
    std::uint64_t v = 0, m = 0, k = 0, lambda = 0;
    std::vector<std::uint64_t> v_factorization; // primes with multiplicity

    friend bool operator==(const ParamSet& a, const ParamSet& b) {
        return a.v == b.v && a.m == b.m && a.k == b.k && a.lambda == b.lambda;
    }
};

/// Builds the parameter set when lambda = (m-1)k^2/(v-1) is a positive integer.
inline std::optional<ParamSet> make_param_set(std::uint64_t v, std::uint64_t m, std::uint64_t k) {
    if (v < 2 || m < 2 || k < 1) return std::nullopt;
    const auto num = static_cast<unsigned __int128>(m - 1) * k * k;
    if (num % (v - 1) != 0) return std::nullopt;
    return ParamSet{v, m, k, static_cast<std::uint64_t>(num / (v - 1)), prime_multiset(v)};
}

struct AdmissibleA {
    std::uint64_t a = 0;
    std::uint64_t g = 0;   // gcd(lambda, a)
    std::uint64_t ell = 0; // 1 + lambda(m-2)/(lambda+a)

    friend bool operator==(const AdmissibleA&, const AdmissibleA&) = default;
};

enum class FilterId {
    Prop1A,   // m in {3,4}
    Prop1B,   // lambda in {1,2}
    Prop1C,   // lambda >= k
    Prop1D,   // lambda(k-1)(m-2) > (lambda-1)k(m-1)
    Prop1G,   // k | v
    Prop1H,   // gcd(k, v-1) = 1
    Prop1I,   // v-1 squarefree
    Prop1J,   // v squarefree and gcd(mk, v) = 1
    LPrime,   // lambda prime
    Remark,   // m < 5 or k < 5 or lambda < 4
    AdmA,     // no admissible minimum character norm a
    Even,     // order-2 character cannot take a square norm
    Struct,   // v has at most three prime factors (other than p^3)
    P3,       // v = p^3 and a necessary condition for C_p^3 fails
};

inline constexpr std::string_view filter_name(FilterId id) {
    switch (id) {
        case FilterId::Prop1A: return "F-PROP1A";
        case FilterId::Prop1B: return "F-PROP1B";
        case FilterId::Prop1C: return "F-PROP1C";
        case FilterId::Prop1D: return "F-PROP1D";
        case FilterId::Prop1G: return "F-PROP1G";
        case FilterId::Prop1H: return "F-PROP1H";
        case FilterId::Prop1I: return "F-PROP1I";
        case FilterId::Prop1J: return "F-PROP1J";
        case FilterId::LPrime: return "F-LPRIME";
        case FilterId::Remark: return "F-REMARK";
        case FilterId::AdmA: return "F-ADMA";
        case FilterId::Even: return "F-EVEN";
        case FilterId::Struct: return "F-STRUCT";
        case FilterId::P3: return "F-P3";
    }
    return "?";
}

inline std::optional<FilterId> parse_filter_id(std::string_view s) {
    for (int i = 0; i <= static_cast<int>(FilterId::P3); ++i) {
        const auto id = static_cast<FilterId>(i);
        if (filter_name(id) == s) return id;
    }
    return std::nullopt;
}

enum class SieveStatus { Survives, Eliminated, OpenP3 };

inline constexpr std::string_view status_name(SieveStatus s) {
    switch (s) {
        case SieveStatus::Survives: return "SURVIVES";
        case SieveStatus::Eliminated: return "ELIMINATED";
        case SieveStatus::OpenP3: return "OPEN_P3";
    }
    return "?";
}

inline std::optional<SieveStatus> parse_status(std::string_view s) {
    for (auto st : {SieveStatus::Survives, SieveStatus::Eliminated, SieveStatus::OpenP3})
        if (status_name(st) == s) return st;
    return std::nullopt;
}

struct FilterOutcome {
    SieveStatus status = SieveStatus::Survives;
    std::optional<FilterId> filter;
    std::vector<AdmissibleA> admissible;
};

/// All (v, m, k, lambda) with 4 <= v <= v_max, m >= 3, k >= 2, mk <= v and
/// integral lambda, ordered by (v, m, k).
inline std::vector<ParamSet> enumerate_candidates_for(std::uint64_t v) {
    std::vector<ParamSet> out;
    if (v < 4) return out;
    const auto factors = prime_multiset(v);
    const auto w = factorize(v - 1);
    for (std::uint64_t m = 3; 2 * m <= v; ++m) {
        // (v-1) | (m-1)k^2  <=>  r | k^2 with r = (v-1)/gcd(v-1, m-1)  <=>  step | k
        auto r = (v - 1) / std::gcd(v - 1, m - 1);
        std::uint64_t step = 1;
        for (const auto& pe : w) {
            const auto p = pe.first;
            unsigned e = 0;
            while (r % p == 0) {
                r /= p;
                ++e;
            }
            for (unsigned i = 0; i < (e + 1) / 2; ++i) step *= p;
        }
        for (std::uint64_t k = step < 2 ? 2 : step; m * k <= v; k += step) {
            const auto num = static_cast<unsigned __int128>(m - 1) * k * k;
            out.push_back(ParamSet{v, m, k, static_cast<std::uint64_t>(num / (v - 1)), factors});
        }
    }
    return out;
}

inline std::vector<ParamSet> enumerate_candidates(std::uint64_t v_max) {
    std::vector<ParamSet> out;
    for (std::uint64_t v = 4; v <= v_max; ++v) {
        auto part = enumerate_candidates_for(v);
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
}

/// Values a satisfying the integrality and divisibility constraints on a
/// nonzero-class character norm: 1 <= a < lambda, a | lambda^2, a | gcd^2,
/// (lambda+a) | (m-2)gcd, ell = 1 + lambda(m-2)/(lambda+a) integral with
/// m/2 < ell <= m-2, and a(m-2) >= lambda+a.
inline std::vector<AdmissibleA> divisibility_candidates(const ParamSet& ps) {
    std::vector<AdmissibleA> out;
    const auto L = ps.lambda;
    const auto m = ps.m;
    if (m < 3) return out;
    for (std::uint64_t a = 1; a < L; ++a) {
        if ((L * L) % a != 0) continue;
        const auto g = std::gcd(L, a);
        if ((g * g) % a != 0) continue;
        if (((m - 2) * g) % (L + a) != 0) continue;
        if ((L * (m - 2)) % (L + a) != 0) continue;
        const auto ell = 1 + L * (m - 2) / (L + a);
        if (!(2 * ell > m && ell <= m - 2)) continue;
        if (a * (m - 2) < L + a) continue;
        out.push_back({a, g, ell});
    }
    return out;
}

/// Both upper bounds on k from the identity-coefficient count, compared exactly:
///   k < lambda/(m-1) + (v-1)lambda/v + (lambda-a)^2/(m a)
///   k < (v-1)lambda/v + lambda^2/(m a)
inline bool passes_k_bounds(const ParamSet& ps, std::uint64_t a) {
    using I = __int128;
    const I v = ps.v, m = ps.m, k = ps.k, L = ps.lambda, A = a;
    const I lhs1 = k * (m - 1) * v * m * A;
    const I rhs1 = L * v * m * A + (v - 1) * L * (m - 1) * m * A + (L - A) * (L - A) * (m - 1) * v;
    if (!(lhs1 < rhs1)) return false;
    const I lhs2 = k * v * m * A;
    const I rhs2 = (v - 1) * L * m * A + L * L * v;
    return lhs2 < rhs2;
}

inline std::vector<AdmissibleA> admissible_a(const ParamSet& ps) {
    auto out = divisibility_candidates(ps);
    std::erase_if(out, [&](const AdmissibleA& x) { return !passes_k_bounds(ps, x.a); });
    return out;
}

namespace detail {

inline bool all_equal(const std::vector<std::uint64_t>& xs) {
    return std::adjacent_find(xs.begin(), xs.end(), std::not_equal_to<>()) == xs.end();
}

// Necessary conditions for a (p^3, m, k, lambda)-SEDF in C_p^3. Returns true when all hold.
inline bool p3_conditions_hold(const ParamSet& ps, std::uint64_t p) {
    using I = unsigned __int128;
    const I P = p, m = ps.m;
    const I num = P * P * (P - 1);
    if (num % (3 * (m - 1)) != 0) return false;
    if (num / (3 * (m - 1)) != ps.lambda) return false;
    const std::uint64_t q = p * p + p + 1;
    if (q % 3 != 0 || !is_square(q / 3)) return false;
    const I s = isqrt(q / 3);
    const I knum = P * (P - 1) * s;
    if (knum % (m - 1) != 0 || knum / (m - 1) != ps.k) return false;
    if (p % 12 != 1) return false;
    if (ps.m <= 3 || (p - 1) % (3 * (ps.m - 1) * (ps.m - 3)) != 0) return false;
    if (ps.lambda % (ps.m - 3) != 0) return false;
    const I k = ps.k;
    return (k * k - k) % (P - 1) == 0;
}

} // namespace detail

inline FilterOutcome apply_filters(const ParamSet& ps) {
    const auto v = ps.v, m = ps.m, k = ps.k, L = ps.lambda;
    auto eliminated = [](FilterId id, std::vector<AdmissibleA> adm = {}) {
        return FilterOutcome{SieveStatus::Eliminated, id, std::move(adm)};
    };

    if (m == 3 || m == 4) return eliminated(FilterId::Prop1A);
    if (L == 1 || L == 2) return eliminated(FilterId::Prop1B);
    if (L >= k) return eliminated(FilterId::Prop1C);
    if (L > 1 && static_cast<unsigned __int128>(L) * (k - 1) * (m - 2) >
                     static_cast<unsigned __int128>(L - 1) * k * (m - 1))
        return eliminated(FilterId::Prop1D);
    if (v % k == 0) return eliminated(FilterId::Prop1G);
    if (std::gcd(k, v - 1) == 1) return eliminated(FilterId::Prop1H);
    if (is_squarefree(v - 1)) return eliminated(FilterId::Prop1I);
    const auto& f = ps.v_factorization;
    const bool v_squarefree = std::adjacent_find(f.begin(), f.end()) == f.end();
    if (v_squarefree && std::gcd(static_cast<std::uint64_t>((m * k) % v), v) == 1)
        return eliminated(FilterId::Prop1J);
    if (is_prime(L)) return eliminated(FilterId::LPrime);
    if (m < 5 || k < 5 || L < 4) return eliminated(FilterId::Remark);

    auto adm = admissible_a(ps);
    if (adm.empty()) return eliminated(FilterId::AdmA);

    // An order-2 character has integer values, so lambda (zero class) or its
    // a_chi (nonzero class) must be a square. a_chi only has to meet the
    // divisibility constraints; the k-bounds restrict the global minimum a.
    if (v % 2 == 0 && !is_square(L)) {
        const auto cands = divisibility_candidates(ps);
        const bool square_a = std::any_of(cands.begin(), cands.end(),
                                          [](const AdmissibleA& x) { return is_square(x.a); });
        if (!square_a) return eliminated(FilterId::Even, std::move(adm));
    }

    const bool prime_cube = f.size() == 3 && detail::all_equal(f);
    if (f.size() <= 3 && !prime_cube) return eliminated(FilterId::Struct, std::move(adm));
    if (prime_cube) {
        if (!detail::p3_conditions_hold(ps, f.front())) return eliminated(FilterId::P3, std::move(adm));
        return FilterOutcome{SieveStatus::OpenP3, std::nullopt, std::move(adm)};
    }
    return FilterOutcome{SieveStatus::Survives, std::nullopt, std::move(adm)};
}

/// Group-level results that depend on the group structure and not just on v.
/// Returns a reason string when no SEDF with m > 2 can exist in G.
inline std::optional<std::string> group_advisory(const AbelianGroup& G) {
    const auto f = factorize(G.order());
    if (G.order() > 1 && f.size() == 1 && G.is_cyclic())
        return "cyclic group of prime power order";
    if (f.size() == 1 && f.front().second == 3 && G.exponent() == f.front().first * f.front().first)
        return "C_p x C_p^2";
    return std::nullopt;
}

struct SieveRow {
    ParamSet params;
    FilterOutcome outcome;
};

class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SieveOptions {
    std::uint64_t v_cap = 100000;
    unsigned threads = 0; // 0: SEDF_THREADS or hardware concurrency
};

/// Full deterministic report for 4 <= v <= v_max in (v, m, k) order. Work is
/// sharded over v across threads and merged in v order.
inline std::vector<SieveRow> sieve_report(std::uint64_t v_max, const SieveOptions& opts = {}) {
    if (v_max > opts.v_cap)
        throw ResourceLimitError("v_max " + std::to_string(v_max) + " exceeds the configured cap " +
                                 std::to_string(opts.v_cap));
    if (v_max < 4) return {};
    const auto n_v = v_max - 3;
    const auto threads = static_cast<std::uint64_t>(std::min<std::uint64_t>(worker_count(opts.threads), n_v));
    std::vector<std::vector<SieveRow>> per_v(n_v);
    auto work = [&](std::uint64_t t) {
        for (std::uint64_t i = t; i < n_v; i += threads) {
            for (auto& ps : enumerate_candidates_for(i + 4)) {
                auto outcome = apply_filters(ps);
                per_v[i].push_back({std::move(ps), std::move(outcome)});
            }
        }
    };
    if (threads <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::uint64_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
    }
    std::vector<SieveRow> rows;
    for (auto& part : per_v)
        rows.insert(rows.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    return rows;
}

} // namespace sedf
