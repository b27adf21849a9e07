#pragma once

// Helpers shared by the test binaries: a fixed-seed RNG and small generators.

#include "sedf/family.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace sedf::testing {

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(0x5EDF5EDFULL);
    return gen;
}

inline std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) { // inclusive
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng());
}

/// Every abelian group (as factor lists, several presentations) up to `max_order`.
inline std::vector<AbelianGroup> small_groups(std::uint64_t max_order) {
    std::vector<AbelianGroup> out;
    for (std::uint64_t n = 2; n <= max_order; ++n)
        for (auto& G : abelian_groups(n)) out.push_back(std::move(G));
    return out;
}

/// A random family of m disjoint k-subsets, with mk <= |G|.
inline Family random_family(const AbelianGroup& G, std::uint64_t m, std::uint64_t k) {
    std::vector<std::uint64_t> perm(G.order());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng());
    std::vector<std::vector<std::uint64_t>> sets(m);
    for (std::uint64_t i = 0; i < m; ++i) sets[i].assign(perm.begin() + i * k, perm.begin() + (i + 1) * k);
    return family_from_indices(G, sets);
}

inline std::string path_in(const char* dir, const std::string& name) { return std::string(dir) + "/" + name; }

} // namespace sedf::testing
