#pragma once

#include "sedf/group.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sedf {

/// Structural problem with a family: overlap, unequal sizes, too few sets, ...
class FamilyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// m pairwise-disjoint k-subsets of an abelian group, in caller order.
class Family {
public:
    Family(AbelianGroup group, std::vector<std::vector<Element>> sets)
        : group_(std::move(group)), sets_(std::move(sets)) {
        if (sets_.size() < 2)
            throw FamilyError("a family needs at least 2 sets, got " + std::to_string(sets_.size()));
        const auto k = sets_.front().size();
        if (k == 0) throw FamilyError("sets must be nonempty");
        std::vector<int> owner(group_.order(), -1);
        indices_.resize(sets_.size());
        for (std::size_t i = 0; i < sets_.size(); ++i) {
            if (sets_[i].size() != k)
                throw FamilyError("set " + std::to_string(i + 1) + " has " +
                                  std::to_string(sets_[i].size()) + " elements, set 1 has " +
                                  std::to_string(k));
            for (const auto& g : sets_[i]) {
                if (!group_.contains(g))
                    throw FamilyError("element " + to_string(g) + " of set " +
                                      std::to_string(i + 1) + " is not in " + to_string(group_));
                const auto idx = group_.index_of(g);
                if (owner[idx] >= 0) {
                    const auto j = static_cast<std::size_t>(owner[idx]);
                    throw FamilyError(j == i ? "element " + to_string(g) + " repeated in set " +
                                                   std::to_string(i + 1)
                                             : "sets " + std::to_string(j + 1) + " and " +
                                                   std::to_string(i + 1) + " overlap in " +
                                                   to_string(g));
                }
                owner[idx] = static_cast<int>(i);
                indices_[i].push_back(idx);
            }
        }
    }

    const AbelianGroup& group() const noexcept { return group_; }
    const std::vector<std::vector<Element>>& sets() const noexcept { return sets_; }
    const std::vector<std::uint64_t>& indices(std::size_t i) const { return indices_.at(i); }

    std::uint64_t v() const noexcept { return group_.order(); }
    std::uint64_t m() const noexcept { return sets_.size(); }
    std::uint64_t k() const noexcept { return sets_.front().size(); }

    friend bool operator==(const Family& a, const Family& b) {
        return a.group_ == b.group_ && a.sets_ == b.sets_;
    }

private:
    AbelianGroup group_;
    std::vector<std::vector<Element>> sets_;
    std::vector<std::vector<std::uint64_t>> indices_;
};

/// Builds a family from dense element indices.
inline Family family_from_indices(const AbelianGroup& G,
                                  const std::vector<std::vector<std::uint64_t>>& sets) {
    std::vector<std::vector<Element>> out;
    out.reserve(sets.size());
    for (const auto& s : sets) {
        auto& dst = out.emplace_back();
        for (auto idx : s) dst.push_back(G.element_at(idx));
    }
    return Family(G, std::move(out));
}

} // namespace sedf
