#pragma once

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tsirelson/family.hpp"
#include "tsirelson/functional.hpp"
#include "tsirelson/parallel.hpp"
#include "tsirelson/vector.hpp"

namespace tsirelson {

struct NormOptions {
    unsigned threads = 0;  // 0: available parallelism
    std::size_t max_span = 400;
};

struct NormResult {
    Dyadic value;
    unsigned j = 0;
    unsigned stable_level = 0;  // first level whose table is a fixed point
};

// Values of ||x restricted to [a,b]||_level for all a <= b in [lo, lo+n-1].
class IntervalTable {
public:
    IntervalTable(Index lo, std::size_t n, unsigned level) : lo_(lo), n_(n), level_(level), v_(n * n) {}

    Index lo() const { return lo_; }
    Index hi() const { return lo_ + n_ - 1; }
    std::size_t size() const { return n_; }
    unsigned level() const { return level_; }

    const Dyadic& at(Index a, Index b) const { return v_[slot(a, b)]; }
    void set(Index a, Index b, Dyadic v) { v_[slot(a, b)] = std::move(v); }

    friend bool operator==(const IntervalTable& l, const IntervalTable& r) {
        return l.lo_ == r.lo_ && l.n_ == r.n_ && l.v_ == r.v_;
    }

private:
    std::size_t slot(Index a, Index b) const {
        if (a < lo_ || b < a || b > hi()) throw PreconditionError("interval outside the table");
        return (a - lo_) * n_ + (b - lo_);
    }

    Index lo_;
    std::size_t n_;
    unsigned level_;
    std::vector<Dyadic> v_;
};

namespace detail {

using u128 = unsigned __int128;

inline BigNat to_bignat(const BigNat& v) { return v; }
inline BigNat to_bignat(u128 v) {
    BigNat r = static_cast<std::uint64_t>(v >> 64);
    r <<= 64;
    r += static_cast<std::uint64_t>(v);
    return r;
}

template <class Int>
Int from_bignat(const BigNat& v) {
    if constexpr (std::is_same_v<Int, BigNat>) {
        return v;
    } else {
        BigNat mask = (BigNat(1) << 64) - 1;
        auto lo = static_cast<std::uint64_t>(v & mask);
        auto hi = static_cast<std::uint64_t>(v >> 64);
        return (static_cast<u128>(hi) << 64) | lo;
    }
}

// Block capacities of each nesting level, innermost first, indexed by offset from lo.
// S_phi: one level of phi(t) starts. kS1: Schreier blocks, at most k of them.
// S2: Schreier blocks, at most t of them. S3: S2 blocks, at most t of them.
inline std::vector<std::vector<std::uint64_t>> capacity_levels(const RegularFamily& fam, Index lo, std::size_t n) {
    auto row = [&](auto g) {
        std::vector<std::uint64_t> r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = g(lo + i);
        return r;
    };
    auto id = [](Index t) { return t; };
    switch (fam.kind()) {
        case RegularFamily::Kind::sphi: return {row([&](Index t) { return fam.phi()(t); })};
        case RegularFamily::Kind::ks1: return {row(id), row([&](Index) { return fam.k(); })};
        case RegularFamily::Kind::s2: return {row(id), row(id)};
        case RegularFamily::Kind::s3: return {row(id), row(id), row(id)};
    }
    return {};
}

// One level of the norm recursion on integer-scaled interval tables.
// T[a*n+b] holds the level-m value of [a,b] times 2^shift; the next table is on scale 2^(shift+1).
template <class Int>
class IntervalDP {
public:
    using Table = std::vector<Int>;
    using Nested = std::vector<Table>;  // best block values per nesting level, index t*(n+1)+q

    IntervalDP(const RegularFamily& fam, Index lo, std::size_t n, unsigned threads)
        : n_(n), caps_(capacity_levels(fam, lo, n)), threads_(threads) {}

    std::size_t size() const { return n_; }

    Table step(const Table& T, Nested& nested) const {
        const std::size_t h = caps_.size();
        nested.assign(h, Table(n_ * (n_ + 1)));
        for (std::size_t lvl = 0; lvl < h; ++lvl)
            parallel_for(n_, threads_, [&](std::size_t qi) { column(lvl, qi + 1, T, nested); });
        Table out(n_ * n_);
        const Table& top = nested.back();
        parallel_for(n_, threads_, [&](std::size_t b) {
            Int run = 0;
            for (std::size_t s = b + 1; s-- > 0;) {
                const Int& cand = top[s * (n_ + 1) + b + 1];
                if (cand > run) run = cand;
                Int kept = T[s * n_ + b] * 2;
                out[s * n_ + b] = run > kept ? run : kept;
            }
        });
        return out;
    }

    // Child intervals (offsets, inclusive) of the preferred optimal split of [a,b].
    std::vector<std::pair<std::size_t, std::size_t>> split_children(const Table& T, const Nested& nested, std::size_t a,
                                                                     std::size_t b, const Int& target) const {
        const std::size_t q = b + 1, top = caps_.size() - 1;
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t s = a; s <= b; ++s) {
            if (nested[top][s * (n_ + 1) + q] == target) {
                expand(top, s, q, target, T, nested, out);
                return out;
            }
        }
        throw std::logic_error("split_children: no start reaches the target value");
    }

private:
    const Int& unit(std::size_t lvl, std::size_t p, std::size_t r, const Table& T, const Nested& nested) const {
        return lvl == 0 ? T[p * n_ + (r - 1)] : nested[lvl - 1][p * (n_ + 1) + r];
    }

    // cover_j(p) = best covering of [p, q) by at most j sub-blocks, first at p.
    // Layers are updated in place with p ascending, so cover[r] for r > p still holds layer j-1.
    // Entries with cap[p] < j are never read at layer j by any p' < p (caps are nondecreasing).
    void column(std::size_t lvl, std::size_t q, const Table& T, Nested& nested) const {
        const auto& cap = caps_[lvl];
        std::vector<Int> cover(q);
        std::size_t jmax = 0;
        for (std::size_t p = 0; p < q; ++p) {
            cover[p] = unit(lvl, p, q, T, nested);
            jmax = std::max<std::size_t>(jmax, std::min<std::uint64_t>(cap[p], q - p));
        }
        Table& best = nested[lvl];
        for (std::size_t p = 0; p < q; ++p)
            if (std::min<std::uint64_t>(cap[p], q - p) == 1) best[p * (n_ + 1) + q] = cover[p];
        for (std::size_t j = 2; j <= jmax; ++j) {
            for (std::size_t p = 0; p < q; ++p) {
                if (cap[p] < j || q - p < j) continue;
                Int v = unit(lvl, p, q, T, nested);
                for (std::size_t r = p + 1; r < q; ++r) {
                    Int cand = unit(lvl, p, r, T, nested) + cover[r];
                    if (cand > v) v = std::move(cand);
                }
                cover[p] = std::move(v);
                if (std::min<std::uint64_t>(cap[p], q - p) == j) best[p * (n_ + 1) + q] = cover[p];
            }
        }
    }

    // All layers of the column q restricted to positions >= t.
    std::vector<std::vector<Int>> column_layers(std::size_t lvl, std::size_t t, std::size_t q, const Table& T,
                                                const Nested& nested) const {
        const auto& cap = caps_[lvl];
        std::size_t jt = std::min<std::uint64_t>(cap[t], q - t);
        std::vector<std::vector<Int>> layers(jt + 1);
        std::vector<Int> cover(q);
        for (std::size_t p = t; p < q; ++p) cover[p] = unit(lvl, p, q, T, nested);
        layers[1] = cover;
        for (std::size_t j = 2; j <= jt; ++j) {
            for (std::size_t p = t; p < q; ++p) {
                if (cap[p] < j || q - p < j) continue;
                Int v = unit(lvl, p, q, T, nested);
                for (std::size_t r = p + 1; r < q; ++r) {
                    Int cand = unit(lvl, p, r, T, nested) + cover[r];
                    if (cand > v) v = std::move(cand);
                }
                cover[p] = std::move(v);
            }
            layers[j] = cover;
        }
        return layers;
    }

    // Walks an optimal covering of [t, q) by a level-lvl block; stopping is preferred,
    // then the earliest next start.
    void expand(std::size_t lvl, std::size_t t, std::size_t q, Int target, const Table& T, const Nested& nested,
                std::vector<std::pair<std::size_t, std::size_t>>& out) const {
        auto layers = column_layers(lvl, t, q, T, nested);
        std::size_t p = t, j = layers.size() - 1;
        auto emit = [&](std::size_t from, std::size_t to, const Int& value) {
            if (lvl == 0)
                out.emplace_back(from, to - 1);
            else
                expand(lvl - 1, from, to, value, T, nested, out);
        };
        while (true) {
            if (unit(lvl, p, q, T, nested) == target) {
                emit(p, q, target);
                return;
            }
            bool moved = false;
            for (std::size_t r = p + 1; j >= 2 && r < q; ++r) {
                const Int& u = unit(lvl, p, r, T, nested);
                if (u + layers[j - 1][r] == target) {
                    emit(p, r, u);
                    target -= u;
                    p = r;
                    --j;
                    moved = true;
                    break;
                }
            }
            if (!moved) throw std::logic_error("expand: trace lost the optimum");
        }
    }

    std::size_t n_;
    std::vector<std::vector<std::uint64_t>> caps_;
    unsigned threads_;
};

}  // namespace detail

// Computes ||x||, the first level j reaching it, all level tables, and a realizing functional.
class NormEngine {
public:
    NormEngine(const RegularFamily& fam, const Vector& x, NormOptions opts = {}) {
        if (x.empty()) throw PreconditionError("norm of the zero vector is not computed");
        const std::size_t n = x.span_hi() - x.span_lo() + 1;
        if (n > opts.max_span)
            throw ResourceError("span of length " + std::to_string(n) + " exceeds the engine budget of " +
                                std::to_string(opts.max_span));
        std::uint32_t shift = 0;
        for (const auto& [_, v] : x.entries()) shift = std::max(shift, v.exponent());
        BigNat total = 0;
        for (const auto& [_, v] : x.entries()) total += v.scaled_to(shift);
        const std::uint64_t bits = bit_length(total);
        if (bits + 8 < 126) {
            auto fast = std::make_unique<Core<detail::u128>>(fam, x, shift, opts);
            if (fast->run(126 - bits)) {
                core_ = std::move(fast);
                return;
            }
        }
        auto exact = std::make_unique<Core<BigNat>>(fam, x, shift, opts);
        exact->run(saturated);
        core_ = std::move(exact);
    }

    const NormResult& result() const { return core_->result(); }
    unsigned stable_level() const { return core_->result().stable_level; }
    IntervalTable table(unsigned level) const { return core_->table(level); }
    FunctionalTree realizing_functional() const { return core_->realizing(); }

private:
    struct CoreBase {
        virtual ~CoreBase() = default;
        virtual const NormResult& result() const = 0;
        virtual IntervalTable table(unsigned level) const = 0;
        virtual FunctionalTree realizing() const = 0;
    };

    template <class Int>
    struct Core final : CoreBase {
        using DP = detail::IntervalDP<Int>;

        Core(const RegularFamily& fam, const Vector& x, std::uint32_t shift, const NormOptions& opts)
            : lo(x.span_lo()), n(x.span_hi() - x.span_lo() + 1), shift(shift), dp(fam, lo, n, opts.threads) {
            std::vector<Int> X(n, Int(0));
            for (const auto& [i, v] : x.entries()) X[i - lo] = detail::from_bignat<Int>(v.scaled_to(shift));
            typename DP::Table t0(n * n);
            for (std::size_t a = 0; a < n; ++a) {
                Int m = X[a];
                for (std::size_t b = a; b < n; ++b) {
                    if (X[b] > m) m = X[b];
                    t0[a * n + b] = m;
                }
            }
            values = X;
            tables.push_back(std::move(t0));
            nested.emplace_back();
        }

        // False when the level limit (integer width) is hit before stabilizing.
        bool run(std::uint64_t level_limit) {
            const std::size_t cap = n + 4;
            for (std::size_t m = 0;; ++m) {
                if (m >= cap) throw std::logic_error("norm iteration exceeded |span| + 4 levels");
                if (m + 1 > level_limit) return false;
                typename DP::Nested nest;
                auto next = dp.step(tables[m], nest);
                bool stable = true;
                for (std::size_t i = 0; i < next.size() && stable; ++i) stable = next[i] == tables[m][i] * 2;
                if (stable) {
                    finish(static_cast<unsigned>(m));
                    return true;
                }
                tables.push_back(std::move(next));
                nested.push_back(std::move(nest));
            }
        }

        void finish(unsigned m) {
            res.stable_level = m;
            const Int& fixed = tables[m][n - 1];
            res.value = Dyadic(detail::to_bignat(fixed), shift + m);
            res.j = m;
            for (unsigned k = 0; k < m; ++k) {
                Int scaled = tables[k][n - 1];
                for (unsigned s = k; s < m; ++s) scaled = scaled * 2;
                if (scaled == fixed) {
                    res.j = k;
                    break;
                }
            }
        }

        const NormResult& result() const override { return res; }

        IntervalTable table(unsigned level) const override {
            unsigned m = std::min(level, res.stable_level);
            IntervalTable out(lo, n, level);
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a; b < n; ++b)
                    out.set(lo + a, lo + b, Dyadic(detail::to_bignat(tables[m][a * n + b]), shift + m));
            return out;
        }

        FunctionalTree trace(unsigned m, std::size_t a, std::size_t b) const {
            if (m == 0) {
                std::size_t best = a;
                for (std::size_t i = a; i <= b; ++i)
                    if (values[i] > values[best]) best = i;
                return FunctionalTree::leaf(lo + best);
            }
            const Int& here = tables[m][a * n + b];
            if (here == tables[m - 1][a * n + b] * 2) return trace(m - 1, a, b);
            auto parts = dp.split_children(tables[m - 1], nested[m], a, b, here);
            std::vector<FunctionalTree> kids;
            for (auto [from, to] : parts) kids.push_back(trace(m - 1, from, to));
            return FunctionalTree::split(std::move(kids));
        }

        FunctionalTree realizing() const override { return trace(res.j, 0, n - 1); }

        Index lo;
        std::size_t n;
        std::uint32_t shift;
        DP dp;
        std::vector<Int> values;
        std::vector<typename DP::Table> tables;
        std::vector<typename DP::Nested> nested;  // nested[m] produced tables[m] from tables[m-1]
        NormResult res;
    };

    std::unique_ptr<CoreBase> core_;
};

inline NormResult norm(const RegularFamily& fam, const Vector& x, NormOptions opts = {}) {
    return NormEngine(fam, x, opts).result();
}

inline FunctionalTree realizing_functional(const RegularFamily& fam, const Vector& x, NormOptions opts = {}) {
    return NormEngine(fam, x, opts).realizing_functional();
}

inline IntervalTable level_zero_table(const Vector& x) {
    if (x.empty()) throw PreconditionError("level_zero_table: empty vector");
    const Index lo = x.span_lo();
    const std::size_t n = x.span_hi() - lo + 1;
    IntervalTable t(lo, n, 0);
    for (std::size_t a = 0; a < n; ++a) {
        Dyadic m;
        for (std::size_t b = a; b < n; ++b) {
            m = max(m, x.at(lo + b));
            t.set(lo + a, lo + b, m);
        }
    }
    return t;
}

// The level after `prev` for the same span, by the same interval DP on exact integers.
inline IntervalTable norm_level_table(const RegularFamily& fam, const Vector& x, const IntervalTable& prev,
                                      unsigned threads = 1) {
    if (x.empty() || prev.lo() != x.span_lo() || prev.hi() != x.span_hi())
        throw PreconditionError("norm_level_table: table does not cover span x");
    const Index lo = prev.lo();
    const std::size_t n = prev.size();
    std::uint32_t shift = 0;
    for (Index a = lo; a <= prev.hi(); ++a)
        for (Index b = a; b <= prev.hi(); ++b) shift = std::max(shift, prev.at(a, b).exponent());
    std::vector<BigNat> T(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) T[a * n + b] = prev.at(lo + a, lo + b).scaled_to(shift);
    detail::IntervalDP<BigNat> dp(fam, lo, n, threads);
    detail::IntervalDP<BigNat>::Nested nest;
    auto next = dp.step(T, nest);
    IntervalTable out(lo, n, prev.level() + 1);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) out.set(lo + a, lo + b, Dyadic(next[a * n + b], shift + 1));
    return out;
}

}  // namespace tsirelson
