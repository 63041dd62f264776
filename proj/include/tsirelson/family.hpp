#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsirelson/errors.hpp"
#include "tsirelson/finite_set.hpp"
#include "tsirelson/numerics.hpp"

namespace tsirelson {

inline constexpr std::uint64_t saturated = std::numeric_limits<std::uint64_t>::max();

namespace detail {
inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > saturated / a) return saturated;
    return a * b;
}
inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > saturated - b ? saturated : a + b; }
}  // namespace detail

// Built-in increasing superadditive growth functions.
class Phi {
public:
    enum class Kind { identity, power, exponential };

    static Phi identity() { return Phi(Kind::identity, 1); }
    static Phi power(std::uint64_t p) {
        if (p < 1) throw ConstraintError("sphi:poly requires p >= 1");
        return Phi(Kind::power, p);
    }
    static Phi exponential(std::uint64_t base) {
        if (base < 2) throw ConstraintError("sphi:exp requires base >= 2");
        return Phi(Kind::exponential, base);
    }

    Kind kind() const { return kind_; }
    std::uint64_t param() const { return param_; }

    // Saturates at 2^64 - 1.
    std::uint64_t operator()(std::uint64_t n) const {
        std::uint64_t r = 1;
        switch (kind_) {
            case Kind::identity: return n;
            case Kind::power:
                for (std::uint64_t i = 0; i < param_; ++i) r = detail::sat_mul(r, n);
                return r;
            case Kind::exponential:
                for (std::uint64_t i = 0; i < n && r != saturated; ++i) r = detail::sat_mul(r, param_);
                return r;
        }
        return r;
    }

    BigNat exact(std::uint64_t n, std::uint64_t bit_budget = default_bit_budget) const {
        switch (kind_) {
            case Kind::identity: return n;
            case Kind::power:
                if (detail::sat_mul(param_, bit_length(n)) > bit_budget) throw ResourceError("phi value exceeds bit budget");
                return ipow(BigNat(n), static_cast<unsigned>(param_));
            case Kind::exponential:
                if (detail::sat_mul(n, bit_length(param_)) > bit_budget) throw ResourceError("phi value exceeds bit budget");
                return ipow(BigNat(param_), static_cast<unsigned>(n));
        }
        return n;
    }

    std::string descriptor() const {
        switch (kind_) {
            case Kind::identity: return "id";
            case Kind::power: return "poly:" + std::to_string(param_);
            case Kind::exponential: return "exp:" + std::to_string(param_);
        }
        return "id";
    }

    friend bool operator==(const Phi&, const Phi&) = default;

private:
    Phi(Kind k, std::uint64_t p) : kind_(k), param_(p) { check_shape(); }

    // Increasing and superadditive on the probe window, where values do not saturate.
    void check_shape() const {
        constexpr std::uint64_t probe = 40;
        for (std::uint64_t x = 1; x <= probe; ++x) {
            auto fx = (*this)(x), fx1 = (*this)(x + 1);
            if (fx1 != saturated && fx1 <= fx) throw ConstraintError("phi is not increasing");
            for (std::uint64_t y = 1; x + y <= probe; ++y) {
                auto fxy = (*this)(x + y), fy = (*this)(y);
                if (fxy == saturated) continue;
                if (fxy < detail::sat_add(fx, fy)) throw ConstraintError("phi is not superadditive");
            }
        }
    }

    Kind kind_;
    std::uint64_t param_;
};

// Greedy-decomposition automaton state. Counters hold remaining capacities:
// cap = elements left in the current Schreier block (or in the S_phi set),
// blocks = further Schreier blocks allowed, outer = further S2 blocks allowed (S3 only).
struct AutomatonState {
    bool started = false;
    Index last = 0;
    std::uint64_t outer = 0;
    std::uint64_t blocks = 0;
    std::uint64_t cap = 0;
    friend bool operator==(const AutomatonState&, const AutomatonState&) = default;
};

class RegularFamily {
public:
    enum class Kind { sphi, ks1, s2, s3 };

    static RegularFamily s1() { return RegularFamily(Kind::sphi, Phi::identity(), 0); }
    static RegularFamily sphi(Phi phi) { return RegularFamily(Kind::sphi, phi, 0); }
    static RegularFamily ks1(std::uint64_t k) {
        if (k < 2) throw ConstraintError("ks1 requires k >= 2");
        return RegularFamily(Kind::ks1, Phi::identity(), k);
    }
    static RegularFamily s2() { return RegularFamily(Kind::s2, Phi::identity(), 0); }
    static RegularFamily s3() { return RegularFamily(Kind::s3, Phi::identity(), 0); }

    // s1 | sphi:id | sphi:poly:<p> | sphi:exp:<b> | ks1:<k> | s2 | s3
    static RegularFamily parse(std::string_view text) {
        auto num = [&](std::string_view s) -> std::uint64_t {
            std::uint64_t v = 0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (s.empty() || ec != std::errc{} || p != s.data() + s.size())
                throw ParseError("bad family parameter in '" + std::string(text) + "'");
            return v;
        };
        if (text == "s1" || text == "sphi:id") return s1();
        if (text == "s2") return s2();
        if (text == "s3") return s3();
        if (text.starts_with("sphi:poly:")) return sphi(Phi::power(num(text.substr(10))));
        if (text.starts_with("sphi:exp:")) return sphi(Phi::exponential(num(text.substr(9))));
        if (text.starts_with("ks1:")) return ks1(num(text.substr(4)));
        throw ParseError("unknown family '" + std::string(text) + "'");
    }

    Kind kind() const { return kind_; }
    const Phi& phi() const { return phi_; }
    std::uint64_t k() const { return k_; }
    bool is_s1() const { return kind_ == Kind::sphi && phi_.kind() == Phi::Kind::identity; }

    std::string name() const {
        switch (kind_) {
            case Kind::sphi: return is_s1() ? "s1" : "sphi:" + phi_.descriptor();
            case Kind::ks1: return "ks1:" + std::to_string(k_);
            case Kind::s2: return "s2";
            case Kind::s3: return "s3";
        }
        return "?";
    }

    // Consumes n (strictly above everything consumed so far); nullopt means reject.
    std::optional<AutomatonState> step(const AutomatonState& st, Index n) const {
        if (n == 0) throw PreconditionError("automaton: elements are positive");
        if (st.started && n <= st.last) throw PreconditionError("automaton: elements must be consumed in increasing order");
        AutomatonState s = st;
        s.last = n;
        if (!st.started) {
            s.started = true;
            switch (kind_) {
                case Kind::sphi: s.cap = phi_(n) - 1; break;
                case Kind::ks1: s.blocks = k_ - 1; s.cap = n - 1; break;
                case Kind::s2: s.blocks = n - 1; s.cap = n - 1; break;
                case Kind::s3: s.outer = n - 1; s.blocks = n - 1; s.cap = n - 1; break;
            }
            return s;
        }
        if (s.cap > 0) {
            if (s.cap != saturated) --s.cap;
            return s;
        }
        if (kind_ == Kind::sphi) return std::nullopt;
        if (s.blocks > 0) {
            --s.blocks;
            s.cap = n - 1;
            return s;
        }
        if (kind_ == Kind::s3 && s.outer > 0) {
            --s.outer;
            s.blocks = n - 1;
            s.cap = n - 1;
            return s;
        }
        return std::nullopt;
    }

    friend bool operator==(const RegularFamily&, const RegularFamily&) = default;

private:
    RegularFamily(Kind k, Phi phi, std::uint64_t kk) : kind_(k), phi_(phi), k_(kk) {}

    Kind kind_;
    Phi phi_;
    std::uint64_t k_;
};

inline bool member(const RegularFamily& fam, const FiniteSet& f) {
    AutomatonState st;
    for (Index n : f) {
        auto next = fam.step(st, n);
        if (!next) return false;
        st = *next;
    }
    return true;
}

// member(F ∪ {n}) without materializing the union.
inline bool member_inserted(const RegularFamily& fam, const FiniteSet& f, Index n) {
    AutomatonState st;
    bool pending = !f.contains(n);
    auto feed = [&](Index e) {
        auto next = fam.step(st, e);
        if (!next) return false;
        st = *next;
        return true;
    };
    for (Index e : f) {
        if (pending && n < e) {
            if (!feed(n)) return false;
            pending = false;
        }
        if (!feed(e)) return false;
    }
    return !pending || feed(n);
}

// max{m : [a, m-1] in F}, by greedy block simulation with exact integers.
inline BigNat range(const RegularFamily& fam, Index a, std::uint64_t bit_budget = default_bit_budget) {
    if (a < 1) throw PreconditionError("range: a must be positive");
    switch (fam.kind()) {
        case RegularFamily::Kind::sphi: return BigNat(a) + fam.phi().exact(a, bit_budget);
        case RegularFamily::Kind::ks1:
        case RegularFamily::Kind::s2: {
            // Each Schreier block starting at p is [p, 2p-1].
            std::uint64_t blocks = fam.kind() == RegularFamily::Kind::ks1 ? fam.k() : a;
            if (blocks + bit_length(a) > bit_budget) throw ResourceError("range exceeds bit budget");
            BigNat p = a;
            for (std::uint64_t i = 0; i < blocks; ++i) p <<= 1;
            return p;
        }
        case RegularFamily::Kind::s3: {
            // a S2 blocks; the S2 block starting at p is [p, p*2^p - 1].
            BigNat p = a;
            for (std::uint64_t i = 0; i < a; ++i) {
                if (p > bit_budget || static_cast<std::uint64_t>(p) + bit_length(p) > bit_budget)
                    throw ResourceError("range(s3, " + std::to_string(a) + ") exceeds the bit budget of " +
                                        std::to_string(bit_budget) + " bits");
                p <<= static_cast<unsigned>(p);
            }
            return p;
        }
    }
    return 0;
}

// min(range(fam, a), cap) without building huge integers.
inline std::uint64_t range_capped(const RegularFamily& fam, Index a, std::uint64_t cap) {
    if (fam.kind() == RegularFamily::Kind::sphi) return std::min(cap, detail::sat_add(a, fam.phi()(a)));
    std::uint64_t steps = fam.kind() == RegularFamily::Kind::ks1 ? fam.k() : a;
    std::uint64_t p = a;
    for (std::uint64_t i = 0; i < steps && p < cap; ++i) {
        if (fam.kind() == RegularFamily::Kind::s3)
            p = p >= 63 ? saturated : detail::sat_mul(p, std::uint64_t{1} << p);
        else
            p = detail::sat_mul(p, 2);
    }
    return std::min(p, cap);
}

// Same quantity by feeding a, a+1, ... to the automaton; limit caps the scan.
inline Index range_by_scan(const RegularFamily& fam, Index a, Index limit = Index{1} << 26) {
    AutomatonState st;
    for (Index m = a;; ++m) {
        if (m - a > limit) throw ResourceError("range scan exceeded its limit");
        auto next = fam.step(st, m);
        if (!next) return m;
        st = *next;
    }
}

// Greedy Schreier blocks E_1(F), E_2(F), ...
inline std::vector<FiniteSet> decompose_schreier(const FiniteSet& f) {
    std::vector<FiniteSet> out;
    const auto& e = f.elements();
    std::size_t i = 0;
    while (i < e.size()) {
        std::size_t take = static_cast<std::size_t>(std::min<std::uint64_t>(e[i], e.size() - i));
        out.emplace_back(std::vector<Index>(e.begin() + i, e.begin() + i + take));
        i += take;
    }
    return out;
}

// Greedy S2 blocks E*_1(F), E*_2(F), ...: each block is the longest prefix of the remainder in S2.
inline std::vector<FiniteSet> decompose_s2(const FiniteSet& f) {
    std::vector<FiniteSet> out;
    const auto& e = f.elements();
    auto fam = RegularFamily::s2();
    std::size_t i = 0;
    while (i < e.size()) {
        AutomatonState st;
        std::size_t j = i;
        while (j < e.size()) {
            auto next = fam.step(st, e[j]);
            if (!next) break;
            st = *next;
            ++j;
        }
        out.emplace_back(std::vector<Index>(e.begin() + i, e.begin() + j));
        i = j;
    }
    return out;
}

// No insertion keeps F in the family; candidates beyond max F + 1 behave like max F + 1.
inline bool is_full(const RegularFamily& fam, const FiniteSet& f) {
    if (f.empty() || !member(fam, f)) throw PreconditionError("is_full: input must be a nonempty member");
    for (Index n = 1; n <= f.max() + 1; ++n)
        if (!f.contains(n) && member_inserted(fam, f, n)) return false;
    return true;
}

inline bool is_full_window(const RegularFamily& fam, Index a, Index b, const FiniteSet& f) {
    if (a > b || f.empty() || f.min() != a || f.max() > b || !member(fam, f))
        throw PreconditionError("is_full_window: need a <= b, a = min F, F within [a,b], F a member");
    for (Index n = a; n <= b; ++n)
        if (!f.contains(n) && member_inserted(fam, f, n)) return false;
    return true;
}

}  // namespace tsirelson
