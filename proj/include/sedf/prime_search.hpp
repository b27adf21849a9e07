#pragma once

// Prime search for the C_p^3 case.
//
// A (p^3, m, k, lambda)-SEDF with m > 2 forces (p^2+p+1)/3 = s^2. With
// x = 2p+1 that is the Pell-type equation x^2 - 12 s^2 = -3, whose positive
// solutions are generated from (3, 1) by the unit 7 + 2*sqrt(12):
//   x' = 7x + 24s,  s' = 2x + 7s.
// Candidates are the prime p = (x-1)/2 along that chain; each is then run
// through the remaining divisibility conditions on m, k, lambda and a.

#include "sedf/arith.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sedf {

struct PellSolution {
    Integer x;
    Integer s;

    /// (x-1)/2; every solution has odd x.
    Integer p() const { return (x - 1) / 2; }

    friend bool operator==(const PellSolution&, const PellSolution&) = default;
};

/// Chain solutions with (x-1)/2 <= bound, in increasing order, starting at (3, 1).
inline std::vector<PellSolution> pell_chain(const Integer& bound) {
    std::vector<PellSolution> out;
    PellSolution cur{3, 1};
    while (cur.p() <= bound) {
        out.push_back(cur);
        cur = PellSolution{7 * cur.x + 24 * cur.s, 2 * cur.x + 7 * cur.s};
    }
    return out;
}

/// Brute-force scan: every s in [1, s_max] with 12 s^2 - 3 a perfect square.
/// Independent of the recurrence; used to check that the chain misses nothing.
inline std::vector<PellSolution> pell_brute_force(std::uint64_t s_max) {
    if (s_max > UINT64_C(1'000'000'000)) throw std::invalid_argument("pell_brute_force: s_max too large");
    std::vector<PellSolution> out;
    for (std::uint64_t s = 1; s <= s_max; ++s) {
        const std::uint64_t t = 12 * s * s - 3;
        const auto x = isqrt(t);
        if (x * x == t) out.push_back({Integer(x), Integer(s)});
    }
    return out;
}

struct PrimeCandidate {
    std::uint64_t p = 0;
    std::uint64_t s = 0;

    friend bool operator==(const PrimeCandidate&, const PrimeCandidate&) = default;
};

/// Primes p <= bound with (p^2+p+1)/3 a perfect square, sorted.
inline std::vector<PrimeCandidate> candidate_primes(std::uint64_t bound) {
    if (bound > static_cast<std::uint64_t>(INT64_MAX))
        throw std::invalid_argument("candidate_primes: bound exceeds 2^63 - 1");
    std::vector<PrimeCandidate> out;
    for (const auto& sol : pell_chain(bound)) {
        const auto p = sol.p().convert_to<std::uint64_t>();
        if (is_prime(p)) out.push_back({p, sol.s.convert_to<std::uint64_t>()});
    }
    return out;
}

/// Outcome of one value of m that passed 3(m-1)(m-3) | (p-1) and (m-1) | p(p-1)s.
struct MStage {
    std::uint64_t m = 0;
    Integer k, lambda, a;
    bool a_integral = false;    // (m-3) | lambda
    bool k_bounds = false;      // lambda < k < 2 lambda
    bool fits = false;          // m k <= p^3
    bool identity_check = false; // (m-1) k^2 == lambda (p^3 - 1) and a (m-3) == lambda
    bool k_sq_minus_k = false;   // (p-1) | (k^2 - k)

    bool passes() const { return a_integral && k_bounds && fits && identity_check && k_sq_minus_k; }
};

enum class P3Verdict { Eliminated, Open };

struct P3Candidate {
    std::uint64_t p = 0;
    std::uint64_t s = 0;
    bool p_mod_12 = false;                // p == 1 (mod 12)
    std::vector<std::uint64_t> surviving_m; // m passing the divisibility stage
    std::vector<MStage> stages;
    P3Verdict verdict = P3Verdict::Eliminated;
};

inline P3Candidate p3_pipeline(std::uint64_t p, std::uint64_t s) {
    const Integer P = p, S = s;
    if (p < 2 || P * P + P + 1 != 3 * S * S)
        throw std::invalid_argument("p3_pipeline: (p^2+p+1)/3 != s^2 for p=" + std::to_string(p) +
                                    ", s=" + std::to_string(s));
    P3Candidate out;
    out.p = p;
    out.s = s;
    out.p_mod_12 = p % 12 == 1;
    if (!out.p_mod_12) return out;

    const Integer p_minus_1 = P - 1;
    const Integer cube = P * P * P;
    for (std::uint64_t m = 4;; ++m) {
        const Integer div = 3 * Integer(m - 1) * Integer(m - 3);
        if (div > p_minus_1) break;
        if (p_minus_1 % div != 0) continue;
        const Integer knum = P * p_minus_1 * S;
        if (knum % (m - 1) != 0) continue;
        out.surviving_m.push_back(m);

        MStage st;
        st.m = m;
        st.k = knum / (m - 1);
        st.lambda = P * P * p_minus_1 / (3 * Integer(m - 1));
        st.a_integral = st.lambda % (m - 3) == 0;
        st.a = st.lambda / (m - 3);
        st.k_bounds = st.lambda < st.k && st.k < 2 * st.lambda;
        st.fits = Integer(m) * st.k <= cube;
        st.identity_check = Integer(m - 1) * st.k * st.k == st.lambda * (cube - 1) &&
                            (!st.a_integral || st.a * (m - 3) == st.lambda);
        // only k mod (p-1) matters here
        const Integer k_mod = st.k % p_minus_1;
        st.k_sq_minus_k = (k_mod * k_mod - k_mod) % p_minus_1 == 0;
        if (st.passes()) out.verdict = P3Verdict::Open;
        out.stages.push_back(std::move(st));
    }
    return out;
}

inline std::string to_string(P3Verdict v) { return v == P3Verdict::Open ? "OPEN" : "ELIMINATED"; }

} // namespace sedf
