#pragma once

// Exact arithmetic in Z[zeta_n].
//
// Values are stored as coefficient vectors in Z[x]/(x^n - 1). That ring is
// larger than Z[zeta_n], so two vectors can denote the same cyclotomic integer;
// equality and integrality are decided on the remainder modulo Phi_n, whose
// coefficients in the basis 1, zeta, ..., zeta^(phi(n)-1) are unique.

#include "sedf/arith.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sedf {

namespace detail {

using IntPoly = std::vector<Integer>; // coefficient i multiplies x^i

// Exact quotient of `num` by a monic polynomial; throws if the remainder is nonzero.
inline IntPoly divide_monic(IntPoly num, const IntPoly& den) {
    const std::size_t dd = den.size() - 1;
    if (num.size() <= dd) throw std::logic_error("divide_monic: degree too small");
    IntPoly q(num.size() - dd);
    for (std::size_t i = num.size(); i-- > dd;) {
        const Integer c = num[i];
        q[i - dd] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
    }
    for (std::size_t i = 0; i < dd; ++i)
        if (num[i] != 0) throw std::logic_error("divide_monic: inexact division");
    return q;
}

} // namespace detail

/// Phi_n as coefficients of 1, x, ..., x^phi(n). Computed once per n by dividing
/// x^n - 1 by Phi_d for every proper divisor d, then shared read-only.
inline std::shared_ptr<const std::vector<std::int64_t>> cyclotomic_polynomial(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("cyclotomic_polynomial: n must be positive");
    static std::mutex mutex;
    static std::map<std::uint64_t, std::shared_ptr<const std::vector<std::int64_t>>> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(n); it != cache.end()) return it->second;
    }
    detail::IntPoly poly(n + 1);
    poly[0] = -1;
    poly[n] = 1;
    for (std::uint64_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        const auto phi_d = cyclotomic_polynomial(d);
        detail::IntPoly den(phi_d->begin(), phi_d->end());
        poly = detail::divide_monic(std::move(poly), den);
    }
    auto result = std::make_shared<std::vector<std::int64_t>>();
    result->reserve(poly.size());
    for (const auto& c : poly) result->push_back(c.convert_to<std::int64_t>());
    std::lock_guard lock(mutex);
    return cache.emplace(n, std::move(result)).first->second;
}

class Cyclotomic {
public:
    explicit Cyclotomic(std::uint64_t n) : n_(checked(n)), coeffs_(n) {}

    Cyclotomic(std::uint64_t n, std::vector<Integer> coeffs) : n_(checked(n)), coeffs_(n) {
        for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs_[i % n_] += coeffs[i];
    }

    /// Sum of zeta^j over the multiset of exponents.
    static Cyclotomic from_indices(std::uint64_t n, std::span<const std::uint64_t> indices) {
        Cyclotomic z(n);
        for (auto j : indices) z.coeffs_[j % z.n_] += 1;
        return z;
    }

    static Cyclotomic from_indices(std::uint64_t n, std::initializer_list<std::uint64_t> indices) {
        return from_indices(n, std::span<const std::uint64_t>(indices.begin(), indices.size()));
    }

    static Cyclotomic from_integer(std::uint64_t n, const Integer& c) {
        Cyclotomic z(n);
        z.coeffs_[0] = c;
        return z;
    }

    std::uint64_t n() const noexcept { return n_; }
    const std::vector<Integer>& coeffs() const noexcept { return coeffs_; }

    Cyclotomic& operator+=(const Cyclotomic& b) {
        same_ring(b);
        for (std::size_t i = 0; i < n_; ++i) coeffs_[i] += b.coeffs_[i];
        return *this;
    }

    Cyclotomic& operator-=(const Cyclotomic& b) {
        same_ring(b);
        for (std::size_t i = 0; i < n_; ++i) coeffs_[i] -= b.coeffs_[i];
        return *this;
    }

    friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
    friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }

    Cyclotomic operator-() const {
        Cyclotomic r(n_);
        for (std::size_t i = 0; i < n_; ++i) r.coeffs_[i] = -coeffs_[i];
        return r;
    }

    /// Cyclic convolution mod x^n - 1. Zero coefficients of `a` are skipped,
    /// which keeps character sums of small subsets cheap.
    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
        a.same_ring(b);
        const auto n = a.n_;
        Cyclotomic r(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (a.coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (b.coeffs_[j] == 0) continue;
                const auto t = i + j >= n ? i + j - n : i + j;
                r.coeffs_[t] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return r;
    }

    /// Multiplication by zeta^shift.
    Cyclotomic rotated(std::uint64_t shift) const {
        Cyclotomic r(n_);
        shift %= n_;
        for (std::size_t i = 0; i < n_; ++i) r.coeffs_[(i + shift) % n_] = coeffs_[i];
        return r;
    }

    /// Adds zeta^shift * this into `acc` (length n) without allocating.
    void accumulate_rotated(std::vector<Integer>& acc, std::uint64_t shift) const {
        shift %= n_;
        for (std::size_t i = 0; i < n_; ++i) {
            if (coeffs_[i] == 0) continue;
            const auto t = i + shift >= n_ ? i + shift - n_ : i + shift;
            acc[t] += coeffs_[i];
        }
    }

    /// Complex conjugation: zeta^j -> zeta^(n-j).
    Cyclotomic conj() const {
        Cyclotomic r(n_);
        for (std::size_t j = 0; j < n_; ++j) r.coeffs_[(n_ - j) % n_] = coeffs_[j];
        return r;
    }

    Cyclotomic norm_sq() const { return *this * conj(); }

    /// Remainder modulo Phi_n: phi(n) coefficients in the power basis of zeta.
    std::vector<Integer> canonical() const {
        const auto phi = cyclotomic_polynomial(n_);
        const std::size_t deg = phi->size() - 1;
        std::vector<Integer> r = coeffs_;
        for (std::size_t i = n_; i-- > deg;) {
            if (r[i] == 0) continue;
            const Integer c = r[i];
            for (std::size_t j = 0; j <= deg; ++j) r[i - deg + j] -= c * (*phi)[j];
        }
        r.resize(deg);
        return r;
    }

    bool is_zero() const {
        for (const auto& c : canonical())
            if (c != 0) return false;
        return true;
    }

    /// The rational integer c with this == c, if there is one.
    std::optional<Integer> as_integer() const {
        const auto r = canonical();
        for (std::size_t i = 1; i < r.size(); ++i)
            if (r[i] != 0) return std::nullopt;
        return r.empty() ? Integer(0) : r[0];
    }

    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
        if (a.n_ != b.n_) return false;
        return (a - b).is_zero();
    }

private:
    static std::uint64_t checked(std::uint64_t n) {
        if (n < 1) throw std::invalid_argument("cyclotomic ring order must be at least 1");
        return n;
    }

    void same_ring(const Cyclotomic& b) const {
        if (b.n_ != n_)
            throw std::invalid_argument("mixed cyclotomic rings: Z[zeta_" + std::to_string(n_) +
                                        "] vs Z[zeta_" + std::to_string(b.n_) + "]");
    }

    std::uint64_t n_;
    std::vector<Integer> coeffs_;
};

inline Cyclotomic conj(const Cyclotomic& a) { return a.conj(); }
inline Cyclotomic norm_sq(const Cyclotomic& a) { return a.norm_sq(); }
inline std::optional<Integer> as_integer(const Cyclotomic& a) { return a.as_integer(); }

} // namespace sedf
