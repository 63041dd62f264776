#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "tsirelson/family.hpp"

namespace tsirelson {

namespace detail {

inline bool schreier_ok(std::span<const Index> block) { return block.empty() || block.size() <= block.front(); }

// Any successive split of `elems` into nonempty Schreier blocks, at most max_blocks of them.
inline bool split_into_schreier(std::span<const Index> elems, std::uint64_t max_blocks) {
    const std::size_t n = elems.size();
    // fewest[i] = fewest blocks covering elems[i..]
    std::vector<std::uint64_t> fewest(n + 1, saturated);
    fewest[n] = 0;
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j <= n; ++j) {
            if (!schreier_ok(elems.subspan(i, j - i))) break;
            if (fewest[j] != saturated) fewest[i] = std::min(fewest[i], fewest[j] + 1);
        }
    }
    return fewest[0] <= max_blocks;
}

inline bool s2_by_definition(std::span<const Index> elems) {
    if (elems.empty()) return true;
    return split_into_schreier(elems, elems.front());
}

inline bool s3_by_definition(std::span<const Index> elems) {
    if (elems.empty()) return true;
    const std::size_t n = elems.size();
    std::vector<std::uint64_t> fewest(n + 1, saturated);
    fewest[n] = 0;
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j <= n; ++j) {
            if (!s2_by_definition(elems.subspan(i, j - i))) continue;
            if (fewest[j] != saturated) fewest[i] = std::min(fewest[i], fewest[j] + 1);
        }
    }
    return fewest[0] <= elems.front();
}

// F as a union of at most k Schreier sets, not necessarily successive.
// Elements are dealt in increasing order; each open set remembers its remaining room.
inline bool union_of_schreier(std::span<const Index> elems, std::uint64_t k) {
    std::set<std::pair<std::size_t, std::vector<std::uint64_t>>> dead;
    auto search = [&](auto&& self, std::size_t i, std::vector<std::uint64_t> room) -> bool {
        if (i == elems.size()) return true;
        std::sort(room.begin(), room.end());
        auto key = std::make_pair(i, room);
        if (dead.count(key)) return false;
        for (std::size_t s = 0; s < room.size(); ++s) {
            if (room[s] == 0 || (s > 0 && room[s] == room[s - 1])) continue;
            auto next = room;
            --next[s];
            if (self(self, i + 1, next)) return true;
        }
        if (room.size() < k) {
            auto next = room;
            next.push_back(elems[i] - 1);
            if (self(self, i + 1, next)) return true;
        }
        dead.insert(key);
        return false;
    };
    return search(search, 0, {});
}

}  // namespace detail

// Definition-level membership by exhaustive search; independent of the automaton.
inline bool member_oracle(const RegularFamily& fam, const FiniteSet& f) {
    if (f.size() > 20 || (!f.empty() && f.max() > 24))
        throw ResourceError("member_oracle budget: |F| <= 20 and max F <= 24");
    if (f.empty()) return true;
    std::span<const Index> e(f.elements());
    switch (fam.kind()) {
        case RegularFamily::Kind::sphi: return f.size() <= fam.phi()(f.min());
        case RegularFamily::Kind::ks1: return detail::union_of_schreier(e, fam.k());
        case RegularFamily::Kind::s2: return detail::s2_by_definition(e);
        case RegularFamily::Kind::s3: return detail::s3_by_definition(e);
    }
    return false;
}

}  // namespace tsirelson
