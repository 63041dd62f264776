#pragma once

#include <optional>
#include <string>
#include <unordered_map>

#include "tsirelson/family.hpp"

namespace tsirelson {

// Literal memoized recursion for hat-j over phi:
// 1 if |[a,b]| <= phi(a), else 2 + max({hat-j(a+i, b-phi(a)+i+1) : 1 <= i <= phi(a)-1} ∪ {1}).
class HatJRecursion {
public:
    explicit HatJRecursion(Phi phi, std::size_t budget = 10'000'000) : phi_(phi), budget_(budget) {}

    std::uint64_t operator()(Index a, Index b) {
        if (a < 1 || a > b) throw PreconditionError("hat_j: need 1 <= a <= b");
        if (a > 0xffffffffu || b > 0xffffffffu) throw ResourceError("hat_j: arguments beyond 2^32");
        const std::uint64_t f = phi_(a);
        if (b - a + 1 <= f) return 1;
        const std::uint64_t key = a << 32 | b;
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        if (memo_.size() >= budget_) throw ResourceError("hat_j memo budget of " + std::to_string(budget_) + " entries exceeded");
        std::uint64_t inner = 1;
        for (std::uint64_t i = 1; i + 1 <= f; ++i) inner = std::max(inner, (*this)(a + i, b - f + i + 1));
        return memo_[key] = 2 + inner;
    }

    std::size_t memo_size() const { return memo_.size(); }

private:
    Phi phi_;
    std::size_t budget_;
    std::unordered_map<std::uint64_t, std::uint64_t> memo_;
};

// hat-j by the one-step form: 1 if |[a,b]| <= phi(a), else 2 + hat-j(a+1, b-phi(a)+2).
// Where phi(a) >= 2 this agrees with the literal recursion; where phi(a) = 1 the literal
// recursion's index set is empty and it returns 3 regardless of b, so the one-step form is used.
inline std::uint64_t hat_j_chain(const Phi& phi, Index a, Index b) {
    if (a < 1 || a > b) throw PreconditionError("hat_j: need 1 <= a <= b");
    std::uint64_t v = 1;
    while (b - a + 1 > phi(a)) {
        b = b - phi(a) + 2;
        ++a;
        v += 2;
    }
    return v;
}

// hat-j with the literal recursion cross-checked from the first chain node where phi >= 2.
inline std::uint64_t hat_j(const Phi& phi, Index a, Index b, std::size_t budget = 10'000'000) {
    const std::uint64_t value = hat_j_chain(phi, a, b);
    std::uint64_t prefix = 0;
    while (b - a + 1 > phi(a) && phi(a) < 2) {
        b = b - phi(a) + 2;
        ++a;
        prefix += 2;
    }
    HatJRecursion direct(phi, budget);
    if (prefix + direct(a, b) != value)
        throw VerificationError("hat_j: one-step form and literal recursion disagree at (" + std::to_string(a) + "," +
                                std::to_string(b) + ")");
    return value;
}

// r_F(s,t) = min{m : {s,s+1} ∪ [t,m-1] in full(F)}: the first m the automaton rejects.
inline BigNat r_param(const RegularFamily& fam, Index s, Index t, Index element_cap = Index{1} << 26) {
    if (s < 1 || s + 1 >= t) throw PreconditionError("r_param: need s + 1 < t");
    AutomatonState st;
    for (Index e : {s, s + 1}) {
        auto next = fam.step(st, e);
        if (!next) throw ConstraintError("r_param: {s, s+1} is not a member of " + fam.name());
        st = *next;
    }
    Index m = t;
    for (;; ++m) {
        if (m - t > element_cap)
            throw ResourceError("r_param(" + fam.name() + "," + std::to_string(s) + "," + std::to_string(t) +
                                ") exceeds the scan budget of " + std::to_string(element_cap) + " elements");
        auto next = fam.step(st, m);
        if (!next) break;
        st = *next;
    }
    // Any smaller m leaves room for m itself, so m is the only candidate; confirm it when cheap.
    if (m <= 8192) {
        std::vector<Index> v{s, s + 1};
        for (Index e = t; e < m; ++e) v.push_back(e);
        if (!is_full(fam, FiniteSet(std::move(v))))
            throw VerificationError("r_param: {s,s+1} ∪ [t,m-1] is not full for " + fam.name());
    }
    return BigNat(m);
}

// q(u,s,t) = t if u > s; r(s,t) if u = s; r(u, q(u+1,s,t)) if u < s.
inline BigNat q_param(const RegularFamily& fam, Index u, Index s, Index t, Index element_cap = Index{1} << 26) {
    if (u < 1 || s + 1 >= t) throw PreconditionError("q_param: need u >= 1 and s + 1 < t");
    if (u > s) return BigNat(t);
    BigNat v = r_param(fam, s, t, element_cap);
    for (Index w = s; w-- > u;) {
        if (v > BigNat(std::numeric_limits<Index>::max() / 2)) throw ResourceError("q_param: value beyond 64 bits");
        v = r_param(fam, w, static_cast<Index>(v), element_cap);
    }
    return v;
}

// Closed forms of r_F for comparison with the scan.
inline std::optional<BigNat> r_closed_form(const RegularFamily& fam, Index s, Index t) {
    switch (fam.kind()) {
        case RegularFamily::Kind::sphi: return BigNat(t) + fam.phi().exact(s) - 2;
        case RegularFamily::Kind::ks1: return pow2(fam.k() - 1) * (t + s - 2);
        case RegularFamily::Kind::s2: return pow2(s - 1) * (t + s - 2);
        case RegularFamily::Kind::s3: return std::nullopt;
    }
    return std::nullopt;
}

namespace detail {

inline std::uint64_t ceil_sqrt(std::uint64_t x) {
    auto r = static_cast<std::uint64_t>(isqrt(BigNat(x)));
    return r * r < x ? r + 1 : r;
}

// max{m >= 1 : sum_{j=3}^{m+3} phi(j) < n}, or 0.
inline std::uint64_t sphi_lower(const Phi& phi, std::uint64_t n) {
    std::uint64_t sum = phi(3), m = 0;
    while (true) {
        std::uint64_t next = sat_add(sum, phi(m + 4));
        if (next >= n) return m;
        sum = next;
        ++m;
    }
}

}  // namespace detail

// Each closed form is evaluated as an exact integer search: 2^m >= n^e holds iff m >= ceil_log2(n^e).
inline std::uint64_t upper_bound(const RegularFamily& fam, std::uint64_t n) {
    if (n < 1) throw PreconditionError("upper_bound: n must be positive");
    const BigNat N = n;
    switch (fam.kind()) {
        case RegularFamily::Kind::sphi: {
            // 2c+1 for the least c with n <= sum_{i=1}^{c+1} phi(i) - c
            std::uint64_t sum = fam.phi()(1), c = 0;
            while (sum < detail::sat_add(n, c)) {
                ++c;
                sum = detail::sat_add(sum, fam.phi()(c + 1));
            }
            return 2 * c + 1;
        }
        case RegularFamily::Kind::ks1: {
            // ceil(4 log n) + 25 for k = 2; ceil(8 log n / (k-2)) + 3 otherwise
            if (fam.k() == 2) return ceil_log2(ipow(N, 4)) + 25;
            const std::uint64_t k2 = fam.k() - 2;
            return (ceil_log2(ipow(N, 8)) + k2 - 1) / k2 + 3;
        }
        case RegularFamily::Kind::s2:
            // least m >= 9 with (m-9)^2 >= 64 log n
            return 9 + detail::ceil_sqrt(ceil_log2(ipow(N, 64)));
        case RegularFamily::Kind::s3:
            // least m >= 9 with (m-9)^2 >= 64 log* n
            return 9 + detail::ceil_sqrt(64 * log_star(N));
    }
    return 0;
}

inline std::uint64_t lower_bound(const RegularFamily& fam, std::uint64_t n) {
    if (n < 1) throw PreconditionError("lower_bound: n must be positive");
    const BigNat N = n;
    auto minus = [](std::uint64_t v, std::uint64_t d) { return v > d ? v - d : 0; };
    switch (fam.kind()) {
        case RegularFamily::Kind::sphi: {
            std::uint64_t v = detail::sphi_lower(fam.phi(), n);
            if (fam.is_s1()) v = std::max(v, minus(static_cast<std::uint64_t>(isqrt(2 * N)), 3));
            return v;
        }
        case RegularFamily::Kind::ks1: {
            // floor((log n - 4) / (k+1)) - 1
            const std::uint64_t lg = floor_log2(N);
            if (lg < 4) return 0;
            return minus((lg - 4) / (fam.k() + 1), 1);
        }
        case RegularFamily::Kind::s2:
            // floor(sqrt(2 log n)) - 5
            return minus(static_cast<std::uint64_t>(isqrt(BigNat(floor_log2(N * N)))), 5);
        case RegularFamily::Kind::s3:
            // floor(sqrt(2 log* n)) - 5
            return minus(static_cast<std::uint64_t>(isqrt(BigNat(2 * log_star(N)))), 5);
    }
    return 0;
}

struct BoundReport {
    std::string family;
    std::uint64_t n = 0;
    std::uint64_t lower = 0;
    std::uint64_t upper = 0;
    std::optional<std::uint64_t> hat_j;  // S_phi only: hat-j(1,n)
};

inline BoundReport bound_report(const RegularFamily& fam, std::uint64_t n) {
    BoundReport r{fam.name(), n, lower_bound(fam, n), upper_bound(fam, n), std::nullopt};
    if (fam.kind() == RegularFamily::Kind::sphi) r.hat_j = hat_j_chain(fam.phi(), 1, n);
    return r;
}

}  // namespace tsirelson
