#pragma once

// Exhaustive backtracking search for SEDFs in a small abelian group.
//
// Sets are filled in order D_1, D_2, ..., each in increasing element index.
// Per-set external tallies are maintained incrementally, so a partial family
// is abandoned as soon as some tally exceeds lambda. Symmetry reduction:
//   - translation: replacing every D_i by g + D_i preserves the definition, so
//     the identity (index 0) can be forced into D_1;
//   - set order: the sets of an SEDF can be permuted freely, so they can be
//     required to have increasing minima. Together with the translation rule
//     this puts the identity in D_1 automatically.
// Both reductions can be switched off to cross-check them.

#include "sedf/family.hpp"
#include "sedf/parallel.hpp"
#include "sedf/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <numeric>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sedf {

struct SearchLimits {
    std::uint64_t node_budget = 100'000'000;
    std::chrono::milliseconds time_budget = std::chrono::minutes(10);
    std::size_t max_solutions = 1000; // 0: unlimited
};

enum class SearchEngine {
    Auto,       // backtracking up to order 16, complement solving above
    Backtrack,  // plain backtracking; lists every canonical solution
    Complement, // solve for the union of the other sets from D_1, then partition it
};

struct SearchOptions {
    SearchEngine engine = SearchEngine::Auto;
    bool prune = true;
    bool normalize_translation = true;
    bool order_sets = true;
    unsigned threads = 0; // 0: SEDF_THREADS or hardware concurrency
};

struct SearchSpec {
    AbelianGroup group;
    std::uint64_t m = 0;
    std::uint64_t k = 0;
    std::optional<std::uint64_t> lambda; // empty when (m-1)k^2/(v-1) is not an integer
    SearchLimits limits;
    SearchOptions options;
};

inline SearchSpec make_search_spec(AbelianGroup G, std::uint64_t m, std::uint64_t k,
                                   SearchLimits limits = {}, SearchOptions options = {}) {
    if (m < 2) throw std::invalid_argument("search needs m >= 2");
    if (k < 1) throw std::invalid_argument("search needs k >= 1");
    SearchSpec spec;
    spec.lambda = expected_lambda(G.order(), m, k);
    spec.group = std::move(G);
    spec.m = m;
    spec.k = k;
    spec.limits = limits;
    spec.options = options;
    return spec;
}

/// The engine actually used. Disabling pruning or a symmetry reduction always
/// selects plain backtracking, since those switches exist for cross-checks.
inline SearchEngine resolve_engine(const SearchSpec& spec) {
    const auto& o = spec.options;
    if (!o.prune || !o.normalize_translation || !o.order_sets) return SearchEngine::Backtrack;
    if (o.engine != SearchEngine::Auto) return o.engine;
    return spec.group.order() <= 16 ? SearchEngine::Backtrack : SearchEngine::Complement;
}

enum class SearchStatus { Found, ExhaustedNone, BudgetExceeded };

inline std::string to_string(SearchStatus s) {
    switch (s) {
    case SearchStatus::Found: return "FOUND";
    case SearchStatus::ExhaustedNone: return "EXHAUSTED_NONE";
    case SearchStatus::BudgetExceeded: return "BUDGET_EXCEEDED";
    }
    return "?";
}

struct SearchResult {
    SearchStatus status = SearchStatus::ExhaustedNone;
    std::vector<Family> families;
    std::uint64_t nodes = 0;
    bool truncated = false; // stopped early at max_solutions
};

namespace detail {

struct SearchShared {
    std::uint64_t v, m, k, lambda;
    std::vector<std::uint32_t> sub; // sub[x * v + y] = index of x - y
    SearchOptions options;
    SearchLimits limits;
    std::chrono::steady_clock::time_point deadline;
    std::atomic<std::uint64_t> nodes{0};      // budget accounting, in blocks of 1024
    std::atomic<std::uint64_t> nodes_done{0}; // exact total, summed when workers finish
    std::atomic<bool> out_of_budget{false};

    // Counts `n` nodes against the shared budget.
    void charge(std::uint64_t n) {
        if (nodes.fetch_add(n) + n > limits.node_budget || std::chrono::steady_clock::now() > deadline)
            out_of_budget = true;
    }
};

class SearchWorker {
public:
    explicit SearchWorker(SearchShared& sh)
        : sh_(sh), v_(sh.v), m_(sh.m), k_(sh.k), lam_(static_cast<std::int32_t>(sh.lambda)),
          owner_(v_, -1), sets_(m_), tally_(m_ * v_, 0), internal_(m_ * v_, 0),
          allowed_(v_, 1), spare_(v_ - m_ * k_) {}

    /// Restricts the remaining sets to `allowed` elements, all of which must be
    /// used (the union of the family is then known in advance).
    void restrict_to(const std::vector<std::uint8_t>& allowed) {
        allowed_ = allowed;
        spare_ = 0;
    }

    /// Runs the subtree whose D_1 starts with `prefix`; collects up to `cap` solutions.
    std::vector<std::vector<std::vector<std::uint32_t>>> run(const std::vector<std::uint32_t>& prefix,
                                                             std::size_t cap) {
        cap_ = cap;
        found_.clear();
        bool ok = true;
        std::size_t placed = 0;
        for (auto x : prefix) {
            ok = place(x, 0) && ok;
            ++placed;
            if (!ok) break;
        }
        if (ok && (!sh_.options.prune || feasible(0))) descend(0);
        for (; placed > 0; --placed) unplace(0);
        return std::move(found_);
    }

    std::uint64_t local_nodes() const noexcept { return nodes_; }

private:
    std::uint32_t sub(std::uint32_t x, std::uint32_t y) const { return sh_.sub[x * v_ + y]; }
    std::int32_t& T(std::size_t j, std::uint32_t g) { return tally_[j * v_ + g]; }
    std::int32_t& I(std::size_t j, std::uint32_t g) { return internal_[j * v_ + g]; }

    // Adds x to set i; returns false if a tally prune fires (state is still updated).
    bool place(std::uint32_t x, std::size_t i) {
        bool ok = true;
        const bool prune = sh_.options.prune;
        for (std::size_t j = 0; j < m_; ++j) {
            if (j == i) {
                for (auto y : sets_[j]) {
                    const auto a = sub(x, y), b = sub(y, x);
                    ++I(i, a);
                    ++I(i, b);
                    if (prune && (I(i, a) > k_i() - lam_ || I(i, b) > k_i() - lam_)) ok = false;
                }
            } else {
                for (auto y : sets_[j]) {
                    const auto a = sub(x, y), b = sub(y, x);
                    if (++T(i, a) > lam_ && prune) ok = false;
                    if (++T(j, b) > lam_ && prune) ok = false;
                }
            }
        }
        owner_[x] = static_cast<std::int32_t>(i);
        sets_[i].push_back(x);
        return ok;
    }

    void unplace(std::size_t i) {
        const auto x = sets_[i].back();
        sets_[i].pop_back();
        owner_[x] = -1;
        for (std::size_t j = 0; j < m_; ++j) {
            if (j == i) {
                for (auto y : sets_[j]) {
                    --I(i, sub(x, y));
                    --I(i, sub(y, x));
                }
            } else {
                for (auto y : sets_[j]) {
                    --T(i, sub(x, y));
                    --T(j, sub(y, x));
                }
            }
        }
    }

    std::int32_t k_i() const { return static_cast<std::int32_t>(k_); }

    // Smallest index set i may start with, given the sets before it.
    std::uint32_t first_allowed(std::size_t i) const {
        if (i == 0) return 0;
        if (sh_.options.order_sets) return sets_[i - 1].front() + 1;
        return 0;
    }

    // Element y (unassigned) can still land in some set >= i.
    bool live(std::uint32_t y, std::size_t i) const {
        const auto& cur = sets_[i];
        if (cur.size() < k_) {
            if (cur.empty()) {
                if (i == 0 && sh_.options.normalize_translation) {
                    if (y == 0) return true;
                } else if (y >= first_allowed(i)) {
                    return true;
                }
            } else if (y > cur.back()) {
                return true;
            }
        }
        if (i + 1 < m_) {
            if (!sh_.options.order_sets) return true;
            const auto lo = cur.empty() ? first_allowed(i) : cur.front() + 1;
            return y >= lo;
        }
        return false;
    }

    // Completion bounds at the point where set i is being filled.
    bool feasible(std::size_t i) {
        std::uint64_t dead = 0;
        live_.assign(v_, 0);
        for (std::uint32_t y = 0; y < v_; ++y) {
            if (owner_[y] >= 0 || !allowed_[y]) continue;
            if (live(y, i))
                live_[y] = 1;
            else
                ++dead;
        }
        if (dead > spare_) return false;
        for (std::size_t j = 0; j < m_; ++j) {
            const auto slots = static_cast<std::int32_t>(k_ - sets_[j].size());
            if (slots >= lam_) continue;
            for (std::uint32_t g = 1; g < v_; ++g) {
                auto reach = T(j, g) + slots;
                if (reach >= lam_) continue;
                for (auto x : sets_[j]) reach += live_[sub(x, g)];
                if (reach < lam_) return false;
            }
        }
        return true;
    }

    bool complete() {
        for (std::size_t j = 0; j < m_; ++j)
            for (std::uint32_t g = 1; g < v_; ++g)
                if (T(j, g) != lam_) return false;
        return true;
    }

    bool stop() {
        if (cap_ != 0 && found_.size() >= cap_) return true;
        if ((++nodes_ & 1023) == 0) sh_.charge(1024);
        return sh_.out_of_budget.load(std::memory_order_relaxed);
    }

    void descend(std::size_t i) {
        if (stop()) return;
        if (sets_[i].size() == k_) {
            if (i + 1 == m_) {
                if (complete()) found_.push_back(sets_);
                return;
            }
            ++i;
        }
        const auto& cur = sets_[i];
        std::uint32_t lo;
        std::uint32_t hi = static_cast<std::uint32_t>(v_); // exclusive
        if (cur.empty()) {
            if (i == 0 && sh_.options.normalize_translation) hi = 1;
            lo = first_allowed(i);
        } else {
            lo = cur.back() + 1;
        }
        // leave room for the rest of this set
        const auto need = static_cast<std::uint32_t>(k_ - cur.size() - 1);
        if (hi > need) hi -= need;
        for (std::uint32_t x = lo; x < hi; ++x) {
            if (owner_[x] >= 0 || !allowed_[x]) continue;
            const bool ok = place(x, i);
            if (ok && (!sh_.options.prune || feasible(i))) descend(i);
            unplace(i);
            if (cap_ != 0 && found_.size() >= cap_) return;
            if (sh_.out_of_budget.load(std::memory_order_relaxed)) return;
        }
    }

    SearchShared& sh_;
    std::uint64_t v_, m_, k_;
    std::int32_t lam_;
    std::vector<std::int32_t> owner_;
    std::vector<std::vector<std::uint32_t>> sets_;
    std::vector<std::int32_t> tally_, internal_;
    std::vector<std::uint8_t> live_;
    std::vector<std::uint8_t> allowed_;
    std::uint64_t spare_;
    std::vector<std::vector<std::vector<std::uint32_t>>> found_;
    std::size_t cap_ = 0;
    std::uint64_t nodes_ = 0;
};

} // namespace detail

namespace detail {

using Solutions = std::vector<std::vector<std::vector<std::uint32_t>>>;

inline std::size_t pool_size(const SearchShared& sh, std::size_t units) {
    return std::max<std::size_t>(1, std::min<std::size_t>(worker_count(sh.options.threads), units));
}

// Runs `body(unit, worker, worker_id)` for every unit index on `threads`
// workers, each owning one SearchWorker. Results are stored per unit by the
// caller, so the merge order does not depend on scheduling.
template <class Body>
void run_units(SearchShared& sh, std::size_t units, std::size_t threads, Body&& body) {
    std::atomic<std::size_t> next{0};
    auto work = [&](std::size_t id) {
        SearchWorker w(sh);
        for (std::size_t u; (u = next.fetch_add(1)) < units;) {
            if (sh.out_of_budget) break;
            body(u, w, id);
        }
        sh.nodes_done += w.local_nodes();
    };
    if (threads <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
    }
}

inline std::vector<Solutions> backtrack_engine(SearchShared& sh) {
    // Top-level branches: the first two elements of D_1 (just the first when k = 1).
    std::vector<std::vector<std::uint32_t>> branches;
    const auto v = static_cast<std::uint32_t>(sh.v);
    const std::uint32_t first_hi = sh.options.normalize_translation ? 1 : v;
    for (std::uint32_t a = 0; a < first_hi; ++a) {
        if (sh.k == 1) {
            branches.push_back({a});
            continue;
        }
        for (auto b = a + 1; b < v; ++b) branches.push_back({a, b});
    }
    std::vector<Solutions> out(branches.size());
    run_units(sh, branches.size(), pool_size(sh, branches.size()),
              [&](std::size_t u, SearchWorker& w, std::size_t) { out[u] = w.run(branches[u], sh.limits.max_solutions); });
    return out;
}

// Solves D_1 U^(-1) = lambda (G - 1) for the 0/1 indicator of U. The system
// matrix A[g][y] = [y + g in D_1] is the group matrix of D_1, so it is
// invertible exactly when no character vanishes on D_1, and then U is unique.
// Elimination runs modulo 31-bit primes; a nonsingular reduction yields the
// unique rational solution's residues, and singularity modulo primes whose
// product exceeds the Hadamard bound k^(v/2) proves det A = 0. In that case
// some nonprincipal chi has chi(D_1) = 0, contradicting chi(D_1) conj(chi(U)) = -lambda.
class ComplementSolver {
public:
    explicit ComplementSolver(const SearchShared& sh) : sh_(sh), v_(sh.v) {
        Integer product = 1;
        Integer bound_sq = 1;
        for (std::uint64_t i = 0; i < v_; ++i) bound_sq *= sh.k; // |det|^2 <= k^v
        for (std::uint64_t q = (UINT64_C(1) << 31) - 1; product * product <= bound_sq; q -= 2) {
            if (is_prime(q)) {
                primes_.push_back(q);
                product *= q;
            }
        }
        if (primes_.empty()) primes_.push_back((UINT64_C(1) << 31) - 1);
        mat_.resize(v_ * (v_ + 1));
    }

    /// Indicator of U, or nothing when no 0/1 solution exists.
    std::optional<std::vector<std::uint8_t>> solve(const std::vector<std::uint32_t>& d1) {
        in_d1_.assign(v_, 0);
        for (auto x : d1) in_d1_[x] = 1;
        for (auto q : primes_) {
            if (auto sol = solve_mod(q)) {
                std::vector<std::uint8_t> u(v_);
                for (std::uint64_t y = 0; y < v_; ++y) {
                    if ((*sol)[y] > 1) return std::nullopt;
                    u[y] = static_cast<std::uint8_t>((*sol)[y]);
                }
                if (!check(d1, u)) return std::nullopt;
                return u;
            }
        }
        return std::nullopt; // singular over Q
    }

private:
    std::optional<std::vector<std::uint64_t>> solve_mod(std::uint64_t q) {
        const auto n = v_, w = v_ + 1;
        auto at = [&](std::uint64_t r, std::uint64_t c) -> std::uint64_t& { return mat_[r * w + c]; };
        for (std::uint64_t g = 0; g < n; ++g) {
            const auto neg_g = sh_.sub[g]; // row 0 of the table: 0 - g
            for (std::uint64_t y = 0; y < n; ++y) at(g, y) = in_d1_[sh_.sub[y * v_ + neg_g]];
            at(g, n) = g == 0 ? 0 : sh_.lambda % q;
        }
        for (std::uint64_t col = 0; col < n; ++col) {
            std::uint64_t piv = col;
            while (piv < n && at(piv, col) == 0) ++piv;
            if (piv == n) return std::nullopt;
            if (piv != col)
                for (std::uint64_t c = col; c < w; ++c) std::swap(at(piv, c), at(col, c));
            const auto inv = powmod(at(col, col), q - 2, q);
            for (std::uint64_t c = col; c < w; ++c) at(col, c) = at(col, c) * inv % q;
            for (std::uint64_t r = 0; r < n; ++r) {
                if (r == col || at(r, col) == 0) continue;
                const auto f = at(r, col);
                for (std::uint64_t c = col; c < w; ++c) at(r, c) = (at(r, c) + (q - f) * at(col, c)) % q;
            }
        }
        std::vector<std::uint64_t> sol(n);
        for (std::uint64_t y = 0; y < n; ++y) sol[y] = at(y, n);
        return sol;
    }

    bool check(const std::vector<std::uint32_t>& d1, const std::vector<std::uint8_t>& u) const {
        std::vector<std::uint64_t> t(v_, 0);
        for (auto x : d1)
            for (std::uint64_t y = 0; y < v_; ++y)
                if (u[y]) ++t[sh_.sub[x * v_ + y]];
        if (t[0] != 0) return false;
        for (std::uint64_t g = 1; g < v_; ++g)
            if (t[g] != sh_.lambda) return false;
        return true;
    }

    const SearchShared& sh_;
    std::uint64_t v_;
    std::vector<std::uint64_t> primes_;
    std::vector<std::uint64_t> mat_;
    std::vector<std::uint8_t> in_d1_;
};

// Enumerates candidate sets D_1 containing the identity that are minimal, as
// sorted index lists, among their images t(D_1 - x) for x in D_1 and units t
// modulo the exponent (translations and multiplier automorphisms both map
// SEDFs to SEDFs, so every SEDF is equivalent to one whose first set is such
// a minimal image). The internal-difference bound prunes along the way.
inline std::vector<std::vector<std::uint32_t>> canonical_first_sets(SearchShared& sh, const AbelianGroup& G) {
    const auto v = sh.v, k = sh.k;
    const auto cap = static_cast<std::int32_t>(k - sh.lambda);
    std::vector<std::vector<std::uint32_t>> scale; // scale[u][y] = index of t_u * y
    for (std::uint64_t t = 1; t < std::max<std::uint64_t>(G.exponent(), 2); ++t) {
        if (std::gcd(t, G.exponent()) != 1) continue;
        auto& row = scale.emplace_back(v);
        for (std::uint64_t y = 0; y < v; ++y) row[y] = static_cast<std::uint32_t>(G.index_of(G.scale(G.element_at(y), t)));
    }
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur{0}, img(k);
    std::vector<std::int32_t> internal(v, 0);
    std::uint64_t visited = 0;

    auto minimal = [&] {
        for (const auto& row : scale) {
            for (auto x : cur) {
                for (std::size_t i = 0; i < k; ++i) img[i] = row[sh.sub[cur[i] * v + x]];
                std::sort(img.begin(), img.end());
                if (std::lexicographical_compare(img.begin(), img.end(), cur.begin(), cur.end())) return false;
            }
        }
        return true;
    };
    auto rec = [&](auto&& self, std::uint32_t from) -> void {
        if ((++visited & 1023) == 0) {
            sh.charge(1024);
            sh.nodes_done += 1024;
        }
        if (sh.out_of_budget) return;
        if (cur.size() == k) {
            if (minimal()) out.push_back(cur);
            return;
        }
        for (auto x = from; x + (k - cur.size()) <= v; ++x) {
            bool ok = true;
            for (auto y : cur) {
                ok &= ++internal[sh.sub[x * v + y]] <= cap;
                ok &= ++internal[sh.sub[y * v + x]] <= cap;
            }
            cur.push_back(x);
            if (ok) self(self, x + 1);
            cur.pop_back();
            for (auto y : cur) {
                --internal[sh.sub[x * v + y]];
                --internal[sh.sub[y * v + x]];
            }
        }
    };
    rec(rec, 1);
    sh.nodes_done += visited & 1023;
    return out;
}

inline std::vector<Solutions> complement_engine(SearchShared& sh, const AbelianGroup& G) {
    const auto firsts = canonical_first_sets(sh, G);
    std::vector<Solutions> out(firsts.size());
    const auto threads = pool_size(sh, firsts.size());
    std::vector<ComplementSolver> solvers;
    solvers.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) solvers.emplace_back(sh);
    run_units(sh, firsts.size(), threads, [&](std::size_t u, SearchWorker& w, std::size_t id) {
        const auto rest = solvers[id].solve(firsts[u]);
        if (!rest) return;
        w.restrict_to(*rest);
        out[u] = w.run(firsts[u], sh.limits.max_solutions);
    });
    return out;
}

} // namespace detail

/// Exhaustive search. EXHAUSTED_NONE certifies that no SEDF with these
/// parameters exists in the group; an exhausted budget is reported as
/// BUDGET_EXCEEDED and never as nonexistence.
///
/// The backtracking engine lists every solution in canonical form (identity
/// in D_1, sets by increasing minimum, as far as the enabled reductions go).
/// The complement engine lists at least one representative of every SEDF up
/// to translation, multiplier automorphisms and reordering of the sets.
inline SearchResult exhaustive_search(const SearchSpec& spec) {
    SearchResult result;
    const auto v = spec.group.order();
    if (!spec.lambda || spec.m * spec.k > v) return result;
    if (v > UINT64_C(1) << 16) throw std::invalid_argument("search: group order too large");

    detail::SearchShared sh;
    sh.v = v;
    sh.m = spec.m;
    sh.k = spec.k;
    sh.lambda = *spec.lambda;
    sh.options = spec.options;
    sh.limits = spec.limits;
    sh.deadline = std::chrono::steady_clock::now() + spec.limits.time_budget;
    sh.sub.resize(v * v);
    for (std::uint64_t x = 0; x < v; ++x)
        for (std::uint64_t y = 0; y < v; ++y)
            sh.sub[x * v + y] = static_cast<std::uint32_t>(spec.group.sub_index(x, y));

    const auto parts = resolve_engine(spec) == SearchEngine::Complement ? detail::complement_engine(sh, spec.group)
                                                                         : detail::backtrack_engine(sh);
    result.nodes = sh.nodes_done;

    const auto cap = spec.limits.max_solutions;
    for (const auto& part : parts) {
        if (cap != 0 && part.size() >= cap) result.truncated = true;
        for (const auto& sol : part) {
            if (cap != 0 && result.families.size() >= cap) {
                result.truncated = true;
                break;
            }
            std::vector<std::vector<std::uint64_t>> sets;
            for (const auto& set : sol) sets.emplace_back(set.begin(), set.end());
            result.families.push_back(family_from_indices(spec.group, sets));
        }
    }

    if (!result.families.empty())
        result.status = SearchStatus::Found;
    else if (sh.out_of_budget)
        result.status = SearchStatus::BudgetExceeded;
    else
        result.status = SearchStatus::ExhaustedNone;
    return result;
}

struct SearchAllEntry {
    SearchSpec spec;
    SearchResult result;
};

/// Every (m, k) with m >= 2, k >= 1, mk <= v and integral lambda, in (m, k) order.
inline std::vector<SearchAllEntry> search_all(const AbelianGroup& G, SearchLimits limits = {},
                                              SearchOptions options = {}, std::uint64_t order_cap = 64) {
    const auto v = G.order();
    if (v > order_cap)
        throw std::invalid_argument("search_all: group order " + std::to_string(v) +
                                    " exceeds the cap " + std::to_string(order_cap));
    std::vector<SearchAllEntry> out;
    for (std::uint64_t m = 2; m <= v; ++m) {
        for (std::uint64_t k = 1; m * k <= v; ++k) {
            if (!expected_lambda(v, m, k)) continue;
            auto spec = make_search_spec(G, m, k, limits, options);
            auto result = exhaustive_search(spec);
            out.push_back({std::move(spec), std::move(result)});
        }
    }
    return out;
}

} // namespace sedf
