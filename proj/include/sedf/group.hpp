#pragma once

// Finite abelian groups C_{n_1} x ... x C_{n_r}, written additively.
//
// Elements and characters are both residue tuples. Every element also has a
// dense mixed-radix index in [0, order) with the first coordinate most
// significant, so index order is lexicographic tuple order and the identity is
// index 0. Array-backed tallies elsewhere are keyed by this index.

#include "sedf/arith.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sedf {

struct Element {
    std::vector<std::uint64_t> coords;

    friend auto operator<=>(const Element&, const Element&) = default;
    friend bool operator==(const Element&, const Element&) = default;
};

struct Character {
    std::vector<std::uint64_t> exps;
    std::uint64_t order = 1;

    bool is_principal() const noexcept { return order == 1; }

    friend bool operator==(const Character&, const Character&) = default;
};

class AbelianGroup {
public:
    AbelianGroup() = default;

    explicit AbelianGroup(std::vector<std::uint64_t> factors) : factors_(std::move(factors)) {
        strides_.assign(factors_.size(), 1);
        for (std::size_t i = factors_.size(); i-- > 0;) {
            if (factors_[i] < 2)
                throw std::invalid_argument("cyclic factor orders must be at least 2, got " +
                                            std::to_string(factors_[i]));
            strides_[i] = order_;
            if (order_ > std::numeric_limits<std::uint64_t>::max() / factors_[i])
                throw std::overflow_error("group order does not fit in 64 bits");
            order_ *= factors_[i];
            exponent_ = std::lcm(exponent_, factors_[i]);
        }
    }

    static AbelianGroup cyclic(std::uint64_t n) { return AbelianGroup({n}); }

    const std::vector<std::uint64_t>& factors() const noexcept { return factors_; }
    std::size_t rank() const noexcept { return factors_.size(); }
    std::uint64_t order() const noexcept { return order_; }
    std::uint64_t exponent() const noexcept { return exponent_; }

    bool is_cyclic() const noexcept { return exponent_ == order_; }

    Element identity() const { return Element{std::vector<std::uint64_t>(rank(), 0)}; }

    /// Reduces arbitrary (possibly negative) integers into an element.
    Element element(std::span<const std::int64_t> raw) const {
        check_arity(raw.size());
        Element e{std::vector<std::uint64_t>(rank())};
        for (std::size_t i = 0; i < rank(); ++i) {
            const auto n = static_cast<std::int64_t>(factors_[i]);
            e.coords[i] = static_cast<std::uint64_t>(((raw[i] % n) + n) % n);
        }
        return e;
    }

    Element element(std::initializer_list<std::int64_t> raw) const {
        return element(std::span<const std::int64_t>(raw.begin(), raw.size()));
    }

    bool contains(const Element& g) const {
        if (g.coords.size() != rank()) return false;
        for (std::size_t i = 0; i < rank(); ++i)
            if (g.coords[i] >= factors_[i]) return false;
        return true;
    }

    std::uint64_t index_of(const Element& g) const {
        check(g);
        std::uint64_t idx = 0;
        for (std::size_t i = 0; i < rank(); ++i) idx += g.coords[i] * strides_[i];
        return idx;
    }

    Element element_at(std::uint64_t idx) const {
        if (idx >= order_) throw std::out_of_range("element index out of range");
        Element e{std::vector<std::uint64_t>(rank())};
        for (std::size_t i = 0; i < rank(); ++i) {
            e.coords[i] = idx / strides_[i];
            idx %= strides_[i];
        }
        return e;
    }

    Element op(const Element& g, const Element& h) const {
        check(g);
        check(h);
        Element r{std::vector<std::uint64_t>(rank())};
        for (std::size_t i = 0; i < rank(); ++i) {
            const auto s = g.coords[i] + h.coords[i];
            r.coords[i] = s >= factors_[i] ? s - factors_[i] : s;
        }
        return r;
    }

    Element inverse(const Element& g) const {
        check(g);
        Element r{std::vector<std::uint64_t>(rank())};
        for (std::size_t i = 0; i < rank(); ++i)
            r.coords[i] = g.coords[i] == 0 ? 0 : factors_[i] - g.coords[i];
        return r;
    }

    Element scale(const Element& g, std::uint64_t t) const {
        check(g);
        Element r{std::vector<std::uint64_t>(rank())};
        for (std::size_t i = 0; i < rank(); ++i)
            r.coords[i] = mulmod(g.coords[i], t % factors_[i], factors_[i]);
        return r;
    }

    // Index arithmetic without materializing tuples.
    std::uint64_t add_index(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t r = 0;
        for (std::size_t i = 0; i < rank(); ++i) {
            const auto n = factors_[i];
            const auto s = (a / strides_[i]) % n + (b / strides_[i]) % n;
            r += (s >= n ? s - n : s) * strides_[i];
        }
        return r;
    }

    std::uint64_t sub_index(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t r = 0;
        for (std::size_t i = 0; i < rank(); ++i) {
            const auto n = factors_[i];
            const auto x = (a / strides_[i]) % n;
            const auto y = (b / strides_[i]) % n;
            r += (x >= y ? x - y : x + n - y) * strides_[i];
        }
        return r;
    }

    std::uint64_t element_order(const Element& g) const {
        check(g);
        std::uint64_t ord = 1;
        for (std::size_t i = 0; i < rank(); ++i)
            ord = std::lcm(ord, factors_[i] / std::gcd(factors_[i], g.coords[i]));
        return ord;
    }

    Character character(std::vector<std::uint64_t> exps) const {
        check_arity(exps.size());
        std::uint64_t ord = 1;
        for (std::size_t i = 0; i < rank(); ++i) {
            if (exps[i] >= factors_[i]) throw std::invalid_argument("character exponent out of range");
            ord = std::lcm(ord, factors_[i] / std::gcd(factors_[i], exps[i]));
        }
        return Character{std::move(exps), ord};
    }

    /// Character with the same exponent tuple as the element at `idx`.
    Character character_at(std::uint64_t idx) const { return character(element_at(idx).coords); }

    /// j such that chi(g) = zeta_N^j, N the group exponent.
    std::uint64_t char_eval_index(const Character& chi, const Element& g) const {
        check_arity(chi.exps.size());
        check(g);
        std::uint64_t j = 0;
        for (std::size_t i = 0; i < rank(); ++i) {
            const auto step = exponent_ / factors_[i];
            j = (j + mulmod(mulmod(chi.exps[i], g.coords[i], factors_[i]), step, exponent_)) %
                exponent_;
        }
        return j;
    }

    friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) {
        return a.factors_ == b.factors_;
    }

private:
    void check_arity(std::size_t n) const {
        if (n != rank())
            throw std::invalid_argument("dimension mismatch: expected " + std::to_string(rank()) +
                                        " coordinates, got " + std::to_string(n));
    }

    void check(const Element& g) const {
        check_arity(g.coords.size());
        for (std::size_t i = 0; i < rank(); ++i)
            if (g.coords[i] >= factors_[i])
                throw std::invalid_argument("coordinate " + std::to_string(g.coords[i]) +
                                            " out of range for factor C_" +
                                            std::to_string(factors_[i]));
    }

    std::vector<std::uint64_t> factors_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t order_ = 1;
    std::uint64_t exponent_ = 1;
};

inline AbelianGroup make_group(std::vector<std::uint64_t> factors) {
    return AbelianGroup(std::move(factors));
}

inline Element op(const AbelianGroup& G, const Element& g, const Element& h) { return G.op(g, h); }
inline Element inverse(const AbelianGroup& G, const Element& g) { return G.inverse(g); }

inline std::uint64_t char_eval_index(const AbelianGroup& G, const Character& chi,
                                     const Element& g) {
    return G.char_eval_index(chi, g);
}

/// Rational-conjugacy class {t*g : gcd(t, |G|) = 1}, sorted by index.
inline std::vector<Element> orbit(const AbelianGroup& G, const Element& g) {
    const auto ord = G.element_order(g);
    std::vector<Element> out;
    // t*g only depends on t mod ord(g), and every unit mod ord(g) lifts to a unit mod |G|
    for (std::uint64_t t = 1; t <= ord; ++t)
        if (std::gcd(t, ord) == 1) out.push_back(G.scale(g, t));
    std::sort(out.begin(), out.end(),
              [&](const Element& a, const Element& b) { return G.index_of(a) < G.index_of(b); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Every character exactly once, in index order (principal first).
inline std::vector<Character> all_characters(const AbelianGroup& G) {
    std::vector<Character> out;
    out.reserve(G.order());
    for (std::uint64_t i = 0; i < G.order(); ++i) out.push_back(G.character_at(i));
    return out;
}

inline std::vector<Character> characters_of_order(const AbelianGroup& G, std::uint64_t n) {
    if (n == 0 || G.exponent() % n != 0)
        throw std::invalid_argument("character order " + std::to_string(n) +
                                    " does not divide the group exponent " +
                                    std::to_string(G.exponent()));
    std::vector<Character> out;
    for (std::uint64_t i = 0; i < G.order(); ++i) {
        auto chi = G.character_at(i);
        if (chi.order == n) out.push_back(std::move(chi));
    }
    return out;
}

inline std::string to_string(const Element& g) {
    std::string s = "(";
    for (std::size_t i = 0; i < g.coords.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(g.coords[i]);
    }
    return s + ")";
}

inline std::string to_string(const AbelianGroup& G) {
    if (G.rank() == 0) return "C_1";
    std::string s;
    for (std::size_t i = 0; i < G.rank(); ++i) {
        if (i) s += " x ";
        s += "C_" + std::to_string(G.factors()[i]);
    }
    return s;
}

/// Every abelian group of order n up to isomorphism, as invariant-factor
/// chains n_1 | n_2 | ... | n_r. Order 1 gives the trivial group.
inline std::vector<AbelianGroup> abelian_groups(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("group order must be positive");
    std::vector<AbelianGroup> out;
    std::vector<std::uint64_t> chain;
    auto rec = [&](auto&& self, std::uint64_t rem, std::uint64_t prev) -> void {
        if (rem == 1) {
            out.emplace_back(chain);
            return;
        }
        for (std::uint64_t d = prev; d <= rem; d += prev) {
            if (d < 2 || rem % d != 0) continue;
            const auto rest = rem / d;
            if (rest != 1 && rest % d != 0) continue;
            chain.push_back(d);
            self(self, rest, d);
            chain.pop_back();
        }
    };
    rec(rec, n, 1);
    return out;
}

} // namespace sedf
