#include "sedf/search.hpp"
#include "sedf/verifier.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

using namespace sedf;
using sedf::testing::small_groups;

namespace {

using IndexFamily = std::vector<std::vector<std::uint64_t>>;

IndexFamily indices_of(const Family& fam) {
    IndexFamily out;
    for (std::size_t i = 0; i < fam.m(); ++i) {
        auto s = fam.indices(i);
        std::sort(s.begin(), s.end());
        out.push_back(s);
    }
    return out;
}

// Unordered family as a sorted list of sorted sets.
IndexFamily normalized(IndexFamily f) {
    for (auto& s : f) std::sort(s.begin(), s.end());
    std::sort(f.begin(), f.end());
    return f;
}

bool definition_holds(const AbelianGroup& G, const IndexFamily& f, std::uint64_t lambda) {
    const auto v = G.order();
    for (std::size_t j = 0; j < f.size(); ++j) {
        std::vector<std::uint64_t> t(v, 0);
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (i == j) continue;
            for (auto x : f[j])
                for (auto y : f[i]) ++t[G.index_of(G.op(G.element_at(x), G.inverse(G.element_at(y))))];
        }
        for (std::uint64_t g = 1; g < v; ++g)
            if (t[g] != lambda) return false;
    }
    return true;
}

// Every SEDF in G with these parameters, as unordered families, by plain enumeration.
std::set<IndexFamily> oracle_families(const AbelianGroup& G, std::uint64_t m, std::uint64_t k) {
    std::set<IndexFamily> out;
    const auto lambda = expected_lambda(G.order(), m, k);
    if (!lambda || m * k > G.order()) return out;
    const auto v = G.order();
    std::vector<int> used(v, 0);
    IndexFamily cur;
    auto rec = [&](auto&& self, std::uint64_t min_first) -> void {
        if (cur.size() == m) {
            if (definition_holds(G, cur, *lambda)) out.insert(normalized(cur));
            return;
        }
        // choose the next set: its smallest element exceeds the previous set's smallest
        std::vector<std::uint64_t> set;
        auto pick = [&](auto&& pself, std::uint64_t from) -> void {
            if (set.size() == k) {
                cur.push_back(set);
                self(self, set.front() + 1);
                cur.pop_back();
                return;
            }
            for (auto x = from; x < v; ++x) {
                if (used[x]) continue;
                if (set.empty() && x < min_first) continue;
                used[x] = 1;
                set.push_back(x);
                pself(pself, x + 1);
                set.pop_back();
                used[x] = 0;
            }
        };
        pick(pick, 0);
    };
    rec(rec, 0);
    return out;
}

IndexFamily translate(const AbelianGroup& G, const IndexFamily& f, std::uint64_t g) {
    IndexFamily out = f;
    for (auto& s : out)
        for (auto& x : s) x = G.add_index(x, g);
    return normalized(out);
}

// Smallest image under translations and multiplier automorphisms: a class key.
IndexFamily class_key(const AbelianGroup& G, const IndexFamily& f) {
    std::optional<IndexFamily> best;
    const auto N = G.exponent();
    for (std::uint64_t t = 1; t < std::max<std::uint64_t>(N, 2); ++t) {
        if (std::gcd(t, N) != 1) continue;
        IndexFamily scaled = f;
        for (auto& s : scaled)
            for (auto& x : s) x = G.index_of(G.scale(G.element_at(x), t));
        for (std::uint64_t g = 0; g < G.order(); ++g) {
            auto img = translate(G, scaled, g);
            if (!best || img < *best) best = img;
        }
    }
    return *best;
}

SearchResult run(const AbelianGroup& G, std::uint64_t m, std::uint64_t k, SearchOptions o = {},
                 SearchLimits l = {.max_solutions = 0}) {
    return exhaustive_search(make_search_spec(G, m, k, l, o));
}

SearchOptions backtrack() { return {.engine = SearchEngine::Backtrack}; }
SearchOptions complement() { return {.engine = SearchEngine::Complement}; }

std::vector<std::pair<std::uint64_t, std::uint64_t>> params(const AbelianGroup& G) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (std::uint64_t m = 2; m <= G.order(); ++m)
        for (std::uint64_t k = 1; m * k <= G.order(); ++k)
            if (expected_lambda(G.order(), m, k)) out.emplace_back(m, k);
    return out;
}

} // namespace

TEST(Search, ZFivePairFound) {
    const auto G = make_group({5});
    const auto r = run(G, 2, 2);
    EXPECT_EQ(r.status, SearchStatus::Found);
    std::set<IndexFamily> got;
    for (const auto& f : r.families) got.insert(indices_of(f));
    EXPECT_TRUE(got.contains(IndexFamily{{0, 3}, {1, 2}}));
    EXPECT_EQ(to_string(r.status), "FOUND");
}

TEST(Search, NonIntegralLambdaIsVacuous) {
    const auto r = run(make_group({7}), 3, 2);
    EXPECT_EQ(r.status, SearchStatus::ExhaustedNone);
    EXPECT_EQ(r.nodes, 0u);
    EXPECT_TRUE(r.families.empty());
}

TEST(Search, SpecValidation) {
    EXPECT_THROW(make_search_spec(make_group({5}), 1, 2), std::invalid_argument);
    EXPECT_THROW(make_search_spec(make_group({5}), 2, 0), std::invalid_argument);
    EXPECT_EQ(make_search_spec(make_group({5}), 2, 2).lambda, 1u);
    EXPECT_FALSE(make_search_spec(make_group({7}), 3, 2).lambda);
}

TEST(Search, EngineSelection) {
    EXPECT_EQ(resolve_engine(make_search_spec(make_group({16}), 2, 1)), SearchEngine::Backtrack);
    EXPECT_EQ(resolve_engine(make_search_spec(make_group({17}), 2, 1)), SearchEngine::Complement);
    EXPECT_EQ(resolve_engine(make_search_spec(make_group({17}), 2, 1, {}, {.prune = false})), SearchEngine::Backtrack);
    EXPECT_EQ(resolve_engine(make_search_spec(make_group({5}), 2, 1, {}, complement())), SearchEngine::Complement);
}

TEST(SearchAll, Examples) {
    EXPECT_TRUE(search_all(make_group({})).empty());

    const auto z5 = search_all(make_group({5}));
    ASSERT_EQ(z5.size(), 2u);
    EXPECT_EQ(z5[0].spec.m, 2u);
    EXPECT_EQ(z5[0].spec.k, 2u);
    EXPECT_EQ(z5[0].result.status, SearchStatus::Found);
    EXPECT_EQ(z5[1].spec.m, 5u);
    EXPECT_EQ(z5[1].spec.k, 1u);
    EXPECT_EQ(z5[1].result.status, SearchStatus::Found);

    for (const auto& e : search_all(make_group({3, 3}))) {
        if (e.spec.m > 2 && e.spec.k > 1) {
            EXPECT_NE(e.result.status, SearchStatus::Found);
        }
    }

    EXPECT_THROW(search_all(make_group({65})), std::invalid_argument);
}

TEST(Search, MatchesEnumerationOracleUpToOrderNine) {
    for (const auto& G : small_groups(9)) {
        for (auto [m, k] : params(G)) {
            const auto oracle = oracle_families(G, m, k);
            const auto r = run(G, m, k, backtrack());
            ASSERT_NE(r.status, SearchStatus::BudgetExceeded);
            EXPECT_EQ(r.status == SearchStatus::Found, !oracle.empty()) << to_string(G) << " " << m << "," << k;

            // canonical output: exactly the oracle families that cover the identity,
            // each listed once with sets ordered by their minima
            std::set<IndexFamily> got;
            for (const auto& f : r.families) {
                const auto idx = indices_of(f);
                for (std::size_t i = 1; i < idx.size(); ++i) EXPECT_LT(idx[i - 1].front(), idx[i].front());
                EXPECT_TRUE(got.insert(normalized(idx)).second);
            }
            std::set<IndexFamily> expected;
            for (const auto& f : oracle)
                if (f.front().front() == 0) expected.insert(f);
            EXPECT_EQ(got, expected) << to_string(G) << " " << m << "," << k;

            // translation closure of the canonical list is the whole oracle set
            std::set<IndexFamily> closure;
            for (const auto& f : got)
                for (std::uint64_t g = 0; g < G.order(); ++g) closure.insert(translate(G, f, g));
            EXPECT_EQ(closure, oracle);
        }
    }
}

TEST(Search, ReductionsOffListSupersets) {
    for (const auto& G : small_groups(8)) {
        for (auto [m, k] : params(G)) {
            const auto oracle = oracle_families(G, m, k);
            SearchOptions no_translation = backtrack();
            no_translation.normalize_translation = false;
            std::set<IndexFamily> all;
            for (const auto& f : run(G, m, k, no_translation).families) all.insert(normalized(indices_of(f)));
            EXPECT_EQ(all, oracle) << to_string(G) << " " << m << "," << k;

            SearchOptions unordered = backtrack();
            unordered.order_sets = false;
            const auto r = run(G, m, k, unordered);
            std::map<IndexFamily, std::size_t> copies;
            for (const auto& f : r.families) {
                EXPECT_EQ(f.indices(0).front(), 0u);
                ++copies[normalized(indices_of(f))];
            }
            std::uint64_t fact = 1;
            for (std::uint64_t i = 2; i < m; ++i) fact *= i;
            for (const auto& f : oracle) {
                if (f.front().front() != 0) continue;
                EXPECT_EQ(copies[f], fact);
            }
        }
    }
}

TEST(Search, PruningDoesNotChangeResults) {
    for (const auto& G : small_groups(12)) {
        for (auto [m, k] : params(G)) {
            SearchOptions off = backtrack();
            off.prune = false;
            const auto a = run(G, m, k, backtrack());
            const auto b = run(G, m, k, off);
            ASSERT_EQ(a.status, b.status);
            std::vector<IndexFamily> fa, fb;
            for (const auto& f : a.families) fa.push_back(indices_of(f));
            for (const auto& f : b.families) fb.push_back(indices_of(f));
            EXPECT_EQ(fa, fb) << to_string(G) << " " << m << "," << k;
            EXPECT_LE(a.nodes, b.nodes);
        }
    }
}

TEST(Search, ComplementEngineCoversEveryClass) {
    for (const auto& G : small_groups(16)) {
        for (auto [m, k] : params(G)) {
            const auto a = run(G, m, k, backtrack());
            const auto b = run(G, m, k, complement());
            ASSERT_NE(a.status, SearchStatus::BudgetExceeded);
            ASSERT_EQ(a.status, b.status) << to_string(G) << " " << m << "," << k;
            std::set<IndexFamily> ka, kb;
            for (const auto& f : a.families) ka.insert(class_key(G, indices_of(f)));
            for (const auto& f : b.families) {
                EXPECT_TRUE(verify_sedf(f).is_sedf);
                kb.insert(class_key(G, indices_of(f)));
            }
            EXPECT_EQ(ka, kb) << to_string(G) << " " << m << "," << k;
        }
    }
}

TEST(Search, EnginesAgreeOnExistenceAboveSixteen) {
    for (std::uint64_t n = 17; n <= 21; ++n) {
        for (const auto& G : abelian_groups(n)) {
            for (auto [m, k] : params(G)) {
                const SearchLimits one{.max_solutions = 1};
                const auto a = run(G, m, k, backtrack(), one);
                const auto b = run(G, m, k, complement(), one);
                EXPECT_EQ(a.status, b.status) << to_string(G) << " " << m << "," << k;
            }
        }
    }
}

TEST(Search, EveryFoundFamilyVerifies) {
    for (const auto& G : small_groups(30)) {
        for (auto [m, k] : params(G)) {
            const auto r = run(G, m, k, {}, {.max_solutions = 5});
            ASSERT_NE(r.status, SearchStatus::BudgetExceeded) << to_string(G) << " " << m << "," << k;
            for (const auto& f : r.families) {
                const auto rep = verify_sedf(f);
                EXPECT_TRUE(rep.is_sedf);
                EXPECT_EQ(f.m(), m);
                EXPECT_EQ(f.k(), k);
            }
        }
    }
}

TEST(Search, DeterministicAcrossThreadCounts) {
    const auto G = make_group({3, 3});
    for (auto engine : {SearchEngine::Backtrack, SearchEngine::Complement}) {
        std::vector<IndexFamily> ref;
        for (unsigned threads : {1u, 2u, 5u}) {
            SearchOptions o{.engine = engine, .threads = threads};
            std::vector<IndexFamily> got;
            for (const auto& f : run(G, 2, 4, o).families) got.push_back(indices_of(f));
            if (threads == 1) {
                ref = got;
            } else {
                EXPECT_EQ(got, ref);
            }
        }
        EXPECT_FALSE(ref.empty());
    }
}

TEST(Search, SolutionCapTruncates) {
    const auto r = run(make_group({13}), 2, 6, backtrack(), {.max_solutions = 1});
    EXPECT_EQ(r.status, SearchStatus::Found);
    EXPECT_EQ(r.families.size(), 1u);
    EXPECT_TRUE(r.truncated);
    const auto all = run(make_group({13}), 2, 6, backtrack());
    EXPECT_GT(all.families.size(), 1u);
    EXPECT_FALSE(all.truncated);
}

TEST(Search, BudgetExhaustionIsNotNonexistence) {
    const auto r = run(make_group({25}), 3, 6, backtrack(), {.node_budget = 2000, .max_solutions = 0});
    EXPECT_EQ(r.status, SearchStatus::BudgetExceeded);
    EXPECT_TRUE(r.families.empty());
    EXPECT_EQ(to_string(r.status), "BUDGET_EXCEEDED");

    const auto t = run(make_group({25}), 3, 6, backtrack(),
                       {.time_budget = std::chrono::milliseconds(0), .max_solutions = 0});
    EXPECT_EQ(t.status, SearchStatus::BudgetExceeded);
}
