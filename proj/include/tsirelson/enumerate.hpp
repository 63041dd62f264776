#pragma once

#include <vector>

#include "tsirelson/family.hpp"
#include "tsirelson/functional.hpp"
#include "tsirelson/vector.hpp"

namespace tsirelson {

// Exhaustive search over functionals of W(F) whose support lies in span x, by exact leaf set.
// best_[d][T] is the largest value of a functional with leaf set T and depth <= d, on the
// common scale 2^(shift + cap); -1 when no such functional exists.
class FunctionalSearch {
public:
    static constexpr std::size_t max_span = 12;
    static constexpr unsigned max_depth = 4;

    FunctionalSearch(const RegularFamily& fam, const Vector& x, unsigned depth_cap) : fam_(fam), cap_(depth_cap) {
        if (x.empty()) throw PreconditionError("functional search needs a nonzero vector");
        lo_ = x.span_lo();
        n_ = x.span_hi() - lo_ + 1;
        if (n_ > max_span || cap_ > max_depth)
            throw ResourceError("functional search budget: span <= " + std::to_string(max_span) +
                                " and depth <= " + std::to_string(max_depth));
        for (const auto& [_, v] : x.entries()) shift_ = std::max(shift_, v.exponent());
        const std::size_t subsets = std::size_t{1} << n_;
        member_.assign(subsets, -1);
        best_.assign(cap_ + 1, std::vector<BigNat>(subsets, BigNat(-1)));
        for (std::size_t i = 0; i < n_; ++i) best_[0][std::size_t{1} << i] = x.at(lo_ + i).scaled_to(shift_) << cap_;
        for (unsigned d = 1; d <= cap_; ++d) {
            for (std::size_t t = 1; t < subsets; ++t) {
                BigNat v = best_[d - 1][t];
                for_each_composition(t, [&](const std::vector<std::size_t>& runs, std::size_t) {
                    BigNat s = split_value(d - 1, runs);
                    if (s > v) v = std::move(s);
                });
                best_[d][t] = std::move(v);
            }
        }
    }

    unsigned depth_cap() const { return cap_; }

    // Largest value over functionals of depth <= d.
    Dyadic best(unsigned d) const {
        BigNat m = 0;
        for (const auto& v : best_.at(d))
            if (v > m) m = v;
        return Dyadic(m, shift_ + cap_);
    }

    // Least depth at which the maximum over depth <= cap is attained.
    unsigned min_depth() const {
        Dyadic top = best(cap_);
        for (unsigned d = 0; d < cap_; ++d)
            if (best(d) == top) return d;
        return cap_;
    }

    // All maximal-value functionals of depth <= cap.
    std::vector<FunctionalTree> optima(std::size_t limit) const {
        BigNat top = scaled_top();
        std::vector<FunctionalTree> out;
        for (std::size_t t = 1; t < best_[cap_].size(); ++t) {
            if (best_[cap_][t] != top) continue;
            for (auto& f : generate(t, cap_, limit)) {
                if (out.size() >= limit) throw ResourceError("more than " + std::to_string(limit) + " optimal functionals");
                out.push_back(std::move(f));
            }
        }
        return out;
    }

    // Some maximal-value functional of depth <= cap has depth <= 1 or a window-full top start set.
    bool has_shallow_or_full_optimum() const {
        if (cap_ >= 1 && best(1) == best(cap_)) return true;
        if (cap_ == 0) return true;
        BigNat top = scaled_top();
        for (std::size_t t = 1; t < best_[cap_].size(); ++t) {
            if (best_[cap_][t] != top) continue;
            const Index a = lo_ + lowest(t), b = lo_ + highest(t);
            bool found = false;
            for_each_composition(t, [&](const std::vector<std::size_t>& runs, std::size_t starts) {
                if (found || split_value(cap_ - 1, runs) != top) return;
                found = is_full_window(fam_, a, b, to_set(starts));
            });
            if (found) return true;
        }
        return false;
    }

private:
    static std::size_t lowest(std::size_t mask) { return static_cast<std::size_t>(__builtin_ctzll(mask)); }
    static std::size_t highest(std::size_t mask) { return 63 - static_cast<std::size_t>(__builtin_clzll(mask)); }

    BigNat scaled_top() const {
        BigNat m = 0;
        for (const auto& v : best_[cap_])
            if (v > m) m = v;
        return m;
    }

    FiniteSet to_set(std::size_t mask) const {
        std::vector<Index> v;
        for (std::size_t i = 0; i < n_; ++i)
            if (mask >> i & 1) v.push_back(lo_ + i);
        return FiniteSet(std::move(v));
    }

    bool starts_member(std::size_t starts) const {
        auto& m = member_[starts];
        if (m < 0) m = member(fam_, to_set(starts)) ? 1 : 0;
        return m == 1;
    }

    // Half the sum of best values at depth d over the runs; -1 if some run has none.
    BigNat split_value(unsigned d, const std::vector<std::size_t>& runs) const {
        BigNat s = 0;
        for (std::size_t r : runs) {
            const BigNat& v = best_[d][r];
            if (v < 0) return BigNat(-1);
            s += v;
        }
        return s >> 1;
    }

    // Visits every split of leaf set t into successive runs whose start set is a member.
    template <class Visit>
    void for_each_composition(std::size_t t, Visit&& visit) const {
        std::vector<std::size_t> pos;
        for (std::size_t i = 0; i < n_; ++i)
            if (t >> i & 1) pos.push_back(i);
        const std::size_t gaps = pos.size() - 1;
        std::vector<std::size_t> runs;
        for (std::size_t cut = 0; cut < (std::size_t{1} << gaps); ++cut) {
            runs.clear();
            std::size_t cur = std::size_t{1} << pos[0], starts = cur;
            for (std::size_t g = 0; g < gaps; ++g) {
                std::size_t bit = std::size_t{1} << pos[g + 1];
                if (cut >> g & 1) {
                    runs.push_back(cur);
                    cur = bit;
                    starts |= bit;
                } else {
                    cur |= bit;
                }
            }
            runs.push_back(cur);
            if (starts_member(starts)) visit(runs, starts);
        }
    }

    // Trees with leaf set t, depth <= d and value best_[d][t]. Children of such a tree are
    // necessarily optimal for their own leaf sets one level down.
    std::vector<FunctionalTree> generate(std::size_t t, unsigned d, std::size_t limit) const {
        std::vector<FunctionalTree> out;
        const BigNat& target = best_[d][t];
        if ((t & (t - 1)) == 0 && best_[0][t] == target) out.push_back(FunctionalTree::leaf(lo_ + lowest(t)));
        if (d == 0) return out;
        for_each_composition(t, [&](const std::vector<std::size_t>& runs, std::size_t) {
            if (split_value(d - 1, runs) != target) return;
            std::vector<std::vector<FunctionalTree>> options;
            for (std::size_t r : runs) {
                options.push_back(generate(r, d - 1, limit));
                if (options.back().empty()) return;
            }
            std::vector<std::size_t> idx(runs.size(), 0);
            while (true) {
                std::vector<FunctionalTree> kids;
                for (std::size_t i = 0; i < runs.size(); ++i) kids.push_back(options[i][idx[i]]);
                if (out.size() >= limit) throw ResourceError("more than " + std::to_string(limit) + " optimal functionals");
                out.push_back(FunctionalTree::split(std::move(kids)));
                std::size_t i = 0;
                while (i < idx.size() && ++idx[i] == options[i].size()) idx[i++] = 0;
                if (i == idx.size()) break;
            }
        });
        return out;
    }

    RegularFamily fam_;
    unsigned cap_;
    Index lo_ = 0;
    std::size_t n_ = 0;
    std::uint32_t shift_ = 0;
    mutable std::vector<signed char> member_;
    std::vector<std::vector<BigNat>> best_;
};

inline std::vector<FunctionalTree> enumerate_norming(const RegularFamily& fam, const Vector& x, unsigned depth_cap,
                                                     std::size_t limit = 100000) {
    return FunctionalSearch(fam, x, depth_cap).optima(limit);
}

}  // namespace tsirelson
