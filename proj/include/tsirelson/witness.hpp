#pragma once

#include <string>
#include <vector>

#include "tsirelson/bounds.hpp"
#include "tsirelson/norm_engine.hpp"

namespace tsirelson {

// Nested full sets F_1..F_d with anchors: a_i and b_i are consecutive in F_i, and
// F_{i+1} sits in [a_i, b_i - 1] starting at a_i.
struct FullChain {
    RegularFamily family;
    std::vector<FiniteSet> sets;
    std::vector<Index> anchors_a;
    std::vector<Index> anchors_b;

    std::size_t depth() const { return sets.size(); }
};

// Violated chain conditions, empty when the chain is valid.
inline std::vector<std::string> chain_violations(const FullChain& c) {
    std::vector<std::string> out;
    const auto& fam = c.family;
    const std::size_t d = c.sets.size();
    if (d == 0) return {"empty chain"};
    if (c.anchors_a.size() + 1 != d || c.anchors_b.size() + 1 != d) return {"anchor count must be d-1"};
    for (std::size_t i = 0; i < d; ++i) {
        const auto& f = c.sets[i];
        const std::string tag = "F_" + std::to_string(i + 1);
        if (f.size() < 3) out.push_back("L1: |" + tag + "| < 3");
        if (!member(fam, f) || !is_full(fam, f)) out.push_back("L1: " + tag + " is not full");
    }
    for (std::size_t i = 0; i + 1 < d; ++i) {
        const auto& f = c.sets[i];
        const auto& next = c.sets[i + 1];
        const Index a = c.anchors_a[i], b = c.anchors_b[i];
        const std::string tag = std::to_string(i + 1);
        auto it = std::find(f.begin(), f.end(), a);
        if (it == f.end() || std::next(it) == f.end() || *std::next(it) != b)
            out.push_back("L2: a_" + tag + ", b_" + tag + " not consecutive in F_" + tag);
        if (!next.contains(a) || next.min() < a || next.max() > b - 1)
            out.push_back("L3: F_" + std::to_string(i + 2) + " not anchored in [a_" + tag + ", b_" + tag + " - 1]");
        if (a >= b) continue;
        const FiniteSet base = f.without(a);
        bool l4 = true;
        for (Index x = a; x < b && l4; ++x)
            for (Index y = x + 1; y < b && l4; ++y)
                if (member(fam, base.with(x).with(y))) l4 = false;
        if (!l4) out.push_back("L4: two points of [a_" + tag + ", b_" + tag + " - 1] fit into F_" + tag + " without a_" + tag);
    }
    return out;
}

// F_i = {i+2, i+3} ∪ [q(i+3, d+2, d+4), q(i+2, d+2, d+4) - 1], a_i = i+3, b_i = q(i+3, d+2, d+4).
inline FullChain full_chain(const RegularFamily& fam, std::size_t d, Index element_cap = Index{1} << 20) {
    if (d < 1) throw PreconditionError("full_chain: d must be positive");
    const Index s = d + 2, t = d + 4;
    auto q = [&](Index u) {
        BigNat v = q_param(fam, u, s, t, element_cap);
        if (v > BigNat(element_cap)) throw ResourceError("full_chain: q value beyond the element budget");
        return static_cast<Index>(v);
    };
    FullChain c{fam, {}, {}, {}};
    for (Index i = 1; i <= d; ++i) {
        const Index lo = q(i + 3), hi = q(i + 2);
        std::vector<Index> v{i + 2, i + 3};
        for (Index e = lo; e < hi; ++e) v.push_back(e);
        c.sets.emplace_back(std::move(v));
        if (i < d) {
            c.anchors_a.push_back(i + 3);
            c.anchors_b.push_back(lo);
        }
    }
    if (auto bad = chain_violations(c); !bad.empty())
        throw VerificationError("full_chain(" + fam.name() + ", " + std::to_string(d) + "): " + bad.front());
    return c;
}

// Indicator of F_d; each earlier level puts twice the running coefficient sum on F_i \ {a_i}.
inline Vector build_witness_vector(const FullChain& c) {
    const std::size_t d = c.depth();
    if (d == 0) throw PreconditionError("build_witness_vector: empty chain");
    Vector x = Vector::indicator(c.sets[d - 1]);
    for (std::size_t i = d - 1; i-- > 0;) {
        const Dyadic twice = x.sum() * Dyadic(2);
        for (Index e : c.sets[i]) {
            if (e == c.anchors_a[i]) continue;
            if (!x.at(e).is_zero()) throw VerificationError("build_witness_vector: F_" + std::to_string(i + 1) + " overlaps later sets beyond a_i");
            x.set(e, twice);
        }
    }
    return x;
}

struct WitnessCertificate {
    FullChain chain;
    Vector x;
    Dyadic norm_value;
    unsigned depth = 0;
    std::size_t target_d = 0;
    FunctionalTree realizing;
};

inline WitnessCertificate certify_witness(const RegularFamily& fam, std::size_t d, NormOptions opts = {}) {
    FullChain c = full_chain(fam, d);
    Vector x = build_witness_vector(c);
    const std::size_t span = x.span_hi() - x.span_lo() + 1;
    if (span > opts.max_span)
        throw ResourceError("witness for " + fam.name() + " at d=" + std::to_string(d) + " spans " + std::to_string(span) +
                            " coordinates; the engine budget is " + std::to_string(opts.max_span));
    NormEngine eng(fam, x, opts);
    WitnessCertificate cert{std::move(c), std::move(x), eng.result().value, eng.result().j, d, eng.realizing_functional()};
    if (cert.depth < d)
        throw VerificationError("witness for " + fam.name() + " at d=" + std::to_string(d) + " has depth " + std::to_string(cert.depth));
    return cert;
}

}  // namespace tsirelson
