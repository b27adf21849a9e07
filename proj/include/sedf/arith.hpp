#pragma once

// Exact integer helpers shared by the group, sieve and prime-search code.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sedf {

using Integer = boost::multiprecision::cpp_int;

/// Prime factorization as (prime, exponent) pairs in increasing prime order.
using Factorization = std::vector<std::pair<std::uint64_t, unsigned>>;

inline std::uint64_t isqrt(std::uint64_t n) {
    if (n < 2) return n;
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    // the long double estimate can be off by one in either direction near 2^64
    while (r > 0 && (r > UINT64_C(0xFFFFFFFF) || r * r > n)) --r;
    while ((r + 1) <= UINT64_C(0xFFFFFFFF) && (r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline bool is_square(std::uint64_t n) {
    const auto r = isqrt(n);
    return r * r == n;
}

inline Integer isqrt(const Integer& n) {
    if (n < 0) throw std::domain_error("isqrt of negative integer");
    return boost::multiprecision::sqrt(n);
}

inline bool is_square(const Integer& n) {
    if (n < 0) return false;
    const Integer r = isqrt(n);
    return r * r == n;
}

/// Trial division; intended for desk-scale inputs (v up to ~10^12).
inline Factorization factorize(std::uint64_t n) {
    Factorization out;
    if (n < 2) return out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

/// Prime factors with multiplicity, in increasing order.
inline std::vector<std::uint64_t> prime_multiset(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (auto [p, e] : factorize(n))
        for (unsigned i = 0; i < e; ++i) out.push_back(p);
    return out;
}

inline bool is_squarefree(std::uint64_t n) {
    for (auto [p, e] : factorize(n))
        if (e > 1) return false;
    return true;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
    std::uint64_t r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// Deterministic Miller-Rabin. The first twelve prime bases are a witness set
/// for every n < 3.3 * 10^24, which covers all 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    constexpr std::uint64_t bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (auto p : bases) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (auto a : bases) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

} // namespace sedf
