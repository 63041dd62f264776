#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "tsirelson/bounds.hpp"
#include "tsirelson/enumerate.hpp"
#include "tsirelson/norm_engine.hpp"
#include "tsirelson/parallel.hpp"
#include "tsirelson/witness.hpp"

namespace tsirelson {

struct ScanReport {
    static constexpr std::size_t payload_limit = 32;

    std::string suite;
    std::string universe;
    std::uint64_t cases = 0;
    std::uint64_t violation_count = 0;
    std::vector<std::string> violations;  // the first payload_limit counterexamples
    bool expect_violations = false;       // suites asserting that a property fails

    bool passed() const { return expect_violations ? violation_count > 0 : violation_count == 0; }

    void violation(std::string payload) {
        ++violation_count;
        if (violations.size() < payload_limit) violations.push_back(std::move(payload));
    }

    void absorb(const ScanReport& other) {
        cases += other.cases;
        violation_count += other.violation_count;
        for (const auto& v : other.violations)
            if (violations.size() < payload_limit) violations.push_back(other.suite + ": " + v);
    }
};

// A statement about the sets of full_{a,b}(fam): `direct` judges an explicit set (empty string when
// it holds); `summary`, when present, judges from the final automaton state and min E_2 (0 if E_2
// is empty) so that sets can be counted instead of listed.
struct WindowLemma {
    std::function<std::string(Index a, Index b, const FiniteSet& f)> direct;
    std::function<bool(Index a, Index b, const AutomatonState& fin, Index min_e2)> summary;
};

namespace detail {

inline AutomatonState unanchored(AutomatonState s) {
    s.last = 0;
    return s;
}

inline auto state_key(const AutomatonState& s) { return std::make_tuple(s.started, s.outer, s.blocks, s.cap); }

inline std::optional<AutomatonState> feed(const RegularFamily& fam, const AutomatonState& s, Index n) {
    auto next = fam.step(s, n);
    if (!next) return std::nullopt;
    return unanchored(*next);
}

inline std::string join(const std::vector<Index>& v) {
    std::string out = "{";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out + "}";
}

inline bool full_schreier(const FiniteSet& f) { return !f.empty() && f.size() == f.min(); }

// Insertion-property instances for a fixed a, counted by a memoized walk over the element range
// (range(a), bound]. Each element is skipped, appended to G's tail M, or appended to F's tail N;
// the walk carries the automaton states of {a} ∪ M, {a} ∪ N and H = M ∪ N.
class InsertionWalk {
public:
    struct Counts {
        std::uint64_t cases = 0;
        std::uint64_t violations = 0;
    };

    InsertionWalk(const RegularFamily& fam, Index a, Index lo, Index hi) : fam_(fam), a_(a), lo_(lo), hi_(hi) {
        root_.g = root_.f = *feed(fam_, AutomatonState{}, a);
    }

    Counts total() { return count(lo_, root_); }

    // Up to `limit` violating (M, N) tails.
    std::vector<std::pair<std::vector<Index>, std::vector<Index>>> witnesses(std::size_t limit) {
        std::vector<std::pair<std::vector<Index>, std::vector<Index>>> out;
        std::vector<Index> m, n;
        collect(lo_, root_, m, n, out, limit);
        return out;
    }

private:
    struct Node {
        int phase = 0;  // 0: M empty, 1: M nonempty and N empty, 2: N nonempty
        AutomatonState g, f, h;
        bool h_dead = false;
    };

    auto key(Index e, const Node& s) const {
        return std::make_tuple(e, s.phase, state_key(s.g), state_key(s.f), state_key(s.h), s.h_dead);
    }

    template <class Visit>
    void children(Index e, const Node& s, Visit&& visit) {
        visit(s, 0);
        auto advance_h = [&](Node& t) {
            if (t.h_dead) return;
            auto h = feed(fam_, t.h, e);
            if (h) t.h = *h;
            else t.h_dead = true;
        };
        if (s.phase < 2) {
            if (auto g = feed(fam_, s.g, e)) {
                Node t = s;
                t.g = *g;
                t.phase = 1;
                advance_h(t);
                visit(t, 1);
            }
        }
        if (s.phase >= 1) {
            if (auto f = feed(fam_, s.f, e)) {
                Node t = s;
                t.f = *f;
                t.g = AutomatonState{};
                t.phase = 2;
                advance_h(t);
                visit(t, 2);
            }
        }
    }

    Counts count(Index e, const Node& s) {
        if (e > hi_) return s.phase == 2 ? Counts{1, s.h_dead ? 1u : 0u} : Counts{};
        auto k = key(e, s);
        if (auto it = memo_.find(k); it != memo_.end()) return it->second;
        Counts c;
        children(e, s, [&](const Node& t, int) {
            Counts sub = count(e + 1, t);
            c.cases += sub.cases;
            c.violations += sub.violations;
        });
        return memo_[k] = c;
    }

    void collect(Index e, const Node& s, std::vector<Index>& m, std::vector<Index>& n,
                 std::vector<std::pair<std::vector<Index>, std::vector<Index>>>& out, std::size_t limit) {
        if (out.size() >= limit) return;
        if (e > hi_) {
            if (s.phase == 2 && s.h_dead) out.emplace_back(m, n);
            return;
        }
        children(e, s, [&](const Node& t, int role) {
            if (out.size() >= limit || count(e + 1, t).violations == 0) return;
            auto& side = role == 1 ? m : n;
            if (role) side.push_back(e);
            collect(e + 1, t, m, n, out, limit);
            if (role) side.pop_back();
        });
    }

    RegularFamily fam_;
    Index a_, lo_, hi_;
    Node root_;
    std::map<std::tuple<Index, int, std::tuple<bool, std::uint64_t, std::uint64_t, std::uint64_t>,
                        std::tuple<bool, std::uint64_t, std::uint64_t, std::uint64_t>,
                        std::tuple<bool, std::uint64_t, std::uint64_t, std::uint64_t>, bool>,
             Counts>
        memo_;
};

// Whether the automaton in state s accepts every element of [e, b].
inline bool accepts_interval(const RegularFamily& fam, AutomatonState s, Index e, Index b) {
    for (Index n = e; n <= b; ++n) {
        auto next = feed(fam, s, n);
        if (!next) return false;
        s = *next;
    }
    return true;
}

// Visits every F in full_{a,b}(fam). Each excluded element leaves a shadow automaton state (the
// prefix with that element inserted); F is maximal iff every shadow dies by the end. A shadow that
// accepts all remaining elements survives every continuation, so the branch is cut.
class FullWindowSearch {
public:
    FullWindowSearch(const RegularFamily& fam, Index a, Index b) : fam_(fam), a_(a), b_(b) {}

    void run(const std::function<void(const FiniteSet&)>& visit) {
        visit_ = &visit;
        chosen_ = {a_};
        walk(a_ + 1, *feed(fam_, AutomatonState{}, a_), {});
    }

private:
    void walk(Index e, const AutomatonState& real, std::vector<AutomatonState> shadows) {
        for (const auto& s : shadows)
            if (accepts_interval(fam_, s, e, b_)) return;
        if (e > b_) {
            (*visit_)(FiniteSet(chosen_));
            return;
        }
        if (auto next = feed(fam_, real, e)) {
            std::vector<AutomatonState> kept;
            for (const auto& s : shadows)
                if (auto t = feed(fam_, s, e)) {
                    bool dup = false;
                    for (const auto& k : kept) dup = dup || state_key(k) == state_key(*t);
                    if (!dup) kept.push_back(*t);
                }
            chosen_.push_back(e);
            walk(e + 1, *next, std::move(kept));
            chosen_.pop_back();
            shadows.push_back(*next);
        }
        walk(e + 1, real, std::move(shadows));
    }

    RegularFamily fam_;
    Index a_, b_;
    std::vector<Index> chosen_;
    const std::function<void(const FiniteSet&)>* visit_ = nullptr;
};

// Counts full_{a,b}(fam) and the sets violating a lemma summary by a memoized walk over
// (next element, automaton state, live shadow states, min E_2).
class FullWindowCounter {
public:
    struct Counts {
        std::uint64_t sets = 0;
        std::uint64_t violations = 0;
    };

    FullWindowCounter(const RegularFamily& fam, Index a, Index b, const WindowLemma& lemma)
        : fam_(fam), a_(a), b_(b), lemma_(lemma) {
        root_.real = *feed(fam_, AutomatonState{}, a);
    }

    Counts total() { return count(a_ + 1, root_); }

    std::vector<FiniteSet> witnesses(std::size_t limit) {
        std::vector<FiniteSet> out;
        std::vector<Index> chosen{a_};
        collect(a_ + 1, root_, chosen, out, limit);
        return out;
    }

private:
    using StateKey = decltype(state_key(AutomatonState{}));

    struct Node {
        AutomatonState real;
        std::vector<AutomatonState> shadows;  // sorted by key, distinct
        Index min_e2 = 0;
    };

    static void canonical(std::vector<AutomatonState>& v) {
        std::sort(v.begin(), v.end(), [](const auto& l, const auto& r) { return state_key(l) < state_key(r); });
        v.erase(std::unique(v.begin(), v.end(), [](const auto& l, const auto& r) { return state_key(l) == state_key(r); }), v.end());
    }

    bool doomed(Index e, const Node& s) const {
        for (const auto& sh : s.shadows)
            if (accepts_interval(fam_, sh, e, b_)) return true;
        return false;
    }

    template <class Visit>
    void children(Index e, const Node& s, Visit&& visit) const {
        if (auto next = feed(fam_, s.real, e)) {
            Node t;
            t.real = *next;
            t.min_e2 = s.min_e2 == 0 && s.real.cap == 0 ? e : s.min_e2;
            for (const auto& sh : s.shadows)
                if (auto u = feed(fam_, sh, e)) t.shadows.push_back(*u);
            canonical(t.shadows);
            visit(t, true);
            Node skip = s;
            skip.shadows.push_back(*next);
            canonical(skip.shadows);
            visit(skip, false);
        } else {
            visit(s, false);
        }
    }

    Counts count(Index e, const Node& s) {
        if (doomed(e, s)) return {};
        if (e > b_) return {1, lemma_.summary(a_, b_, s.real, s.min_e2) ? 1u : 0u};
        std::vector<StateKey> sh;
        for (const auto& x : s.shadows) sh.push_back(state_key(x));
        auto key = std::make_tuple(e, state_key(s.real), std::move(sh), s.min_e2);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Counts c;
        children(e, s, [&](const Node& t, bool) {
            Counts sub = count(e + 1, t);
            c.sets += sub.sets;
            c.violations += sub.violations;
        });
        return memo_[std::move(key)] = c;
    }

    void collect(Index e, const Node& s, std::vector<Index>& chosen, std::vector<FiniteSet>& out, std::size_t limit) {
        if (out.size() >= limit) return;
        if (e > b_) {
            out.emplace_back(chosen);
            return;
        }
        children(e, s, [&](const Node& t, bool included) {
            if (out.size() >= limit || count(e + 1, t).violations == 0) return;
            if (included) chosen.push_back(e);
            collect(e + 1, t, chosen, out, limit);
            if (included) chosen.pop_back();
        });
    }

    RegularFamily fam_;
    Index a_, b_;
    const WindowLemma& lemma_;
    Node root_;
    std::map<std::tuple<Index, StateKey, std::vector<StateKey>, Index>, Counts> memo_;
};

inline std::vector<RegularFamily> built_in_families() {
    return {RegularFamily::s1(),     RegularFamily::sphi(Phi::power(2)), RegularFamily::sphi(Phi::exponential(2)),
            RegularFamily::ks1(2),   RegularFamily::ks1(3),              RegularFamily::s2(),
            RegularFamily::s3()};
}

inline std::string window(Index a, Index b) { return "[" + std::to_string(a) + "," + std::to_string(b) + "]"; }

}  // namespace detail

// One instance of the insertion property: F = {a} ∪ N, G = {a} ∪ M with M < N.
inline ScanReport insertion_instance(const RegularFamily& fam, const FiniteSet& f, const FiniteSet& g) {
    ScanReport r{"insertion-instance/" + fam.name(), "F=" + f.to_string() + " G=" + g.to_string(), 0, 0, {}, false};
    if (f.size() < 2 || g.size() < 2 || f.min() != g.min())
        throw PreconditionError("insertion_instance: F and G need a common minimum and two elements each");
    const Index a = f.min();
    const FiniteSet n = f.without(a), m = g.without(a);
    if (!(m.max() < n.min()) || !member(fam, f) || !member(fam, g) || !(BigNat(range_capped(fam, a, m.min())) < m.min()))
        throw PreconditionError("insertion_instance: premises do not hold");
    ++r.cases;
    const FiniteSet h = m.united(n);
    if (!member(fam, h)) r.violation("H=" + h.to_string() + " is not a member");
    return r;
}

// F = {2,99} ∪ [100,199] and G = {2,19} ∪ [20,39]: both in 2S1 while M ∪ N is not.
inline std::pair<FiniteSet, FiniteSet> two_s1_insertion_counterexample() {
    return {FiniteSet::interval(100, 199).with(2).with(99), FiniteSet::interval(20, 39).with(2).with(19)};
}

// Interval tails M = [m, x] and N = [x+1, y], y as large as {a} ∪ N allows, for 2 <= a <= a_max
// and m in (range(a), range(a) + m_span]; elements stay below element_cap.
inline ScanReport insertion_interval_scan(const RegularFamily& fam, Index a_max, Index m_span, Index element_cap = Index{1} << 16) {
    ScanReport r{"insertion-intervals/" + fam.name(),
                 "a <= " + std::to_string(a_max) + ", M = [m,x], N = [x+1,y] maximal, m - range(a) <= " + std::to_string(m_span), 0, 0, {},
                 fam.kind() == RegularFamily::Kind::ks1};
    auto longest = [&](Index a, Index from) -> std::optional<Index> {
        AutomatonState st = *detail::feed(fam, AutomatonState{}, a);
        Index e = from;
        for (; e < element_cap; ++e) {
            auto next = detail::feed(fam, st, e);
            if (!next) return e - 1;
            st = *next;
        }
        return std::nullopt;
    };
    for (Index a = 2; a <= a_max; ++a) {
        const std::uint64_t ra = range_capped(fam, a, element_cap);
        if (ra >= element_cap) continue;
        for (Index m = ra + 1; m <= ra + m_span; ++m) {
            auto x_max = longest(a, m);
            if (!x_max) continue;
            for (Index x = m; x <= *x_max; ++x) {
                auto y = longest(a, x + 1);
                if (!y || *y < x + 1) continue;
                ++r.cases;
                if (!member(fam, FiniteSet::interval(m, *y)))
                    r.violation("a=" + std::to_string(a) + " M=" + FiniteSet::interval(m, x).to_string() +
                                " N=" + FiniteSet::interval(x + 1, *y).to_string());
            }
        }
    }
    return r;
}

// Exhaustive over all a and all {a} ∪ M, {a} ∪ N within [1, bound] meeting the premises.
inline ScanReport insertion_exhaustive_scan(const RegularFamily& fam, Index bound) {
    // Instance counts stay below 3^bound, inside 64 bits.
    if (bound < 1 || bound > 40) throw PreconditionError("insertion scan: bound must be in [1, 40]");
    ScanReport r{"insertion/" + fam.name(), "a, M < N within [1," + std::to_string(bound) + "], range(a) < min M", 0, 0, {},
                 fam.kind() == RegularFamily::Kind::ks1};
    for (Index a = 1; a <= bound; ++a) {
        const std::uint64_t ra = range_capped(fam, a, bound + 1);
        if (ra >= bound) continue;
        detail::InsertionWalk walk(fam, a, ra + 1, bound);
        auto c = walk.total();
        r.cases += c.cases;
        if (c.violations == 0) continue;
        for (auto& [m, n] : walk.witnesses(ScanReport::payload_limit)) {
            std::vector<Index> h = m;
            h.insert(h.end(), n.begin(), n.end());
            r.violation("a=" + std::to_string(a) + " M=" + FiniteSet(m).to_string() + " N=" + FiniteSet(n).to_string() +
                        " H=" + FiniteSet(h).to_string());
        }
        r.violation_count += c.violations - std::min<std::uint64_t>(c.violations, ScanReport::payload_limit);
    }
    return r;
}

// For kS1 the property is expected to fail; the exhaustive part is joined by interval tails
// with larger elements and, for k = 2, the standard instance.
inline ScanReport insertion_scan(const RegularFamily& fam, Index bound) {
    ScanReport r = insertion_exhaustive_scan(fam, bound);
    if (fam.kind() == RegularFamily::Kind::ks1) {
        auto tails = insertion_interval_scan(fam, 4, 16);
        r.universe += "; " + tails.universe;
        r.absorb(tails);
    }
    if (fam.kind() == RegularFamily::Kind::ks1 && fam.k() == 2) {
        r.universe += "; F={2,99}∪[100,199], G={2,19}∪[20,39]";
        auto [f, g] = two_s1_insertion_counterexample();
        r.absorb(insertion_instance(fam, f, g));
    }
    return r;
}

// For a >= 3, a+1 < b <= c <= bound with {a,a+1} ∪ [b,c] full: no {a,a',a''} ∪ [b,c] with
// distinct a',a'' in [a+2, b-1] is a member.
inline ScanReport strong_scan(const RegularFamily& fam, Index bound) {
    if (bound > 64) throw PreconditionError("strong_scan: bound must be at most 64");
    ScanReport r{"strong/" + fam.name(), "3 <= a, a+1 < b <= c <= " + std::to_string(bound), 0, 0, {}, false};
    for (Index a = 3; a <= bound; ++a)
        for (Index b = a + 2; b <= bound; ++b)
            for (Index c = b; c <= bound; ++c) {
                FiniteSet base = FiniteSet::interval(b, c);
                FiniteSet head = base.with(a).with(a + 1);
                if (!member(fam, head) || !is_full(fam, head)) continue;
                const FiniteSet tail = base.with(a);
                for (Index x = a + 2; x < b; ++x)
                    for (Index y = x + 1; y < b; ++y) {
                        ++r.cases;
                        FiniteSet probe = tail.with(x).with(y);
                        if (member(fam, probe)) r.violation(probe.to_string() + " is a member");
                    }
            }
    return r;
}

enum class SequenceReading {
    literal,       // b >= g(s, a)
    max_plus_one,  // b + 1 >= g(s, a)
};

// Successive full sets F_1 < ... < F_s inside [a,b], for inner family S1 (bound 2^s a) or S2
// (bound tau(s,a) a). A full set with minimum m has maximum at least range(m) - 1 and
// [m, range(m) - 1] is full, so the tightest packing takes these intervals from a upward.
inline ScanReport full_sequence_scan(const RegularFamily& inner, Index bound, SequenceReading reading) {
    const bool s2 = inner.kind() == RegularFamily::Kind::s2;
    if (!s2 && !inner.is_s1()) throw PreconditionError("full_sequence_scan: inner family must be s1 or s2");
    ScanReport r{std::string("full-sequence/") + inner.name() + (reading == SequenceReading::literal ? "" : "/max+1"),
                 "successive full " + inner.name() + " sets in [a,b], 1 <= a <= b <= " + std::to_string(bound), 0, 0, {},
                 false};
    for (Index a = 1; a <= bound; ++a) {
        std::vector<FiniteSet> packed;
        Index p = a;
        while (true) {
            const std::uint64_t next = range_capped(inner, p, bound + 2);
            if (next > bound + 1) break;
            FiniteSet f = FiniteSet::interval(p, next - 1);
            if (!is_full(inner, f)) throw VerificationError("full_sequence_scan: packing interval " + f.to_string() + " is not full");
            packed.push_back(std::move(f));
            p = next;
        }
        for (std::size_t s = 1; s <= packed.size(); ++s) {
            const Index least_b = packed[s - 1].max();
            for (Index b = least_b; b <= bound; ++b) {
                ++r.cases;
                const Index lhs = reading == SequenceReading::literal ? b : b + 1;
                bool holds;
                if (s2) holds = std::is_gteq(compare_tower(BigNat(lhs / a), s, a));
                else holds = s < 64 && (BigNat(a) << s) <= lhs;
                if (!holds) {
                    std::string sets;
                    for (std::size_t i = 0; i < s; ++i) sets += (i ? " < " : "") + packed[i].to_string();
                    r.violation("a=" + std::to_string(a) + " b=" + std::to_string(b) + " s=" + std::to_string(s) + ": " + sets);
                }
            }
        }
    }
    return r;
}

// Greedy packing of S2-full intervals from a: the s-th ends at or below tau(s, 2a+s-1) - 1.
inline ScanReport s3_packing_scan(Index a_max, Index s_max, std::uint64_t bit_budget = std::uint64_t{1} << 20) {
    ScanReport r{"s2-full-packing", "a <= " + std::to_string(a_max) + ", s <= " + std::to_string(s_max), 0, 0, {}, false};
    const auto s2 = RegularFamily::s2();
    for (Index a = 1; a <= a_max; ++a) {
        BigNat p = a;
        for (Index s = 1; s <= s_max; ++s) {
            if (p >= bit_budget) break;
            const auto shift = static_cast<std::uint64_t>(p);
            if (shift + bit_length(p) > bit_budget) break;
            BigNat next = p << static_cast<unsigned>(shift);
            if (next <= 4096) {
                auto lo = static_cast<Index>(p), hi = static_cast<Index>(next) - 1;
                if (!is_full(s2, FiniteSet::interval(lo, hi)))
                    r.violation("[" + std::to_string(lo) + "," + std::to_string(hi) + "] is not S2-full");
            }
            ++r.cases;
            if (std::is_gt(compare_tower(next, s, 2 * a + s - 1)))
                r.violation("a=" + std::to_string(a) + " s=" + std::to_string(s) + ": packing ends past tau(s, 2a+s-1) - 1");
            p = std::move(next);
        }
    }
    return r;
}

// Every F in full_{a,b}(fam) over windows [a,b] ⊆ [1, bound] with [a,b] not a member. Sets are
// counted through the lemma summary when it exists and listed otherwise; reported counterexamples
// are always re-judged by the direct check.
inline ScanReport full_window_scan(const RegularFamily& fam, Index bound, std::string suite, const WindowLemma& lemma) {
    if (bound > 64) throw PreconditionError("full_window_scan: bound must be at most 64");
    ScanReport r{std::move(suite), "full_{a,b}(" + fam.name() + "), [a,b] ⊆ [1," + std::to_string(bound) + "], [a,b] not a member",
                 0, 0, {}, false};
    for (Index a = 1; a <= bound; ++a)
        for (Index b = a; b <= bound; ++b) {
            if (member(fam, FiniteSet::interval(a, b))) continue;
            if (!lemma.summary) {
                detail::FullWindowSearch(fam, a, b).run([&](const FiniteSet& f) {
                    ++r.cases;
                    if (auto bad = lemma.direct(a, b, f); !bad.empty()) r.violation(detail::window(a, b) + " F=" + f.to_string() + ": " + bad);
                });
                continue;
            }
            detail::FullWindowCounter counter(fam, a, b, lemma);
            const auto c = counter.total();
            r.cases += c.sets;
            if (c.violations == 0) continue;
            std::uint64_t listed = 0;
            for (const auto& f : counter.witnesses(ScanReport::payload_limit)) {
                auto bad = lemma.direct(a, b, f);
                if (bad.empty() || !is_full_window(fam, a, b, f))
                    throw VerificationError("full_window_scan: summary and direct check disagree on " + f.to_string());
                r.violation(detail::window(a, b) + " F=" + f.to_string() + ": " + bad);
                ++listed;
            }
            r.violation_count += c.violations - listed;
        }
    return r;
}

namespace detail {

// Number of Schreier blocks of the greedy decomposition that are full, from the automaton state
// after the whole set; `blocks_at_start` is the block budget granted by the first element.
inline std::uint64_t full_blocks(const AutomatonState& fin, std::uint64_t blocks_at_start) {
    return blocks_at_start - fin.blocks + 1 - (fin.cap > 0 ? 1 : 0);
}

}  // namespace detail

// full_{a,b}(S_phi) = [a,b] full(S_phi).
inline WindowLemma sphi_window_lemma(const RegularFamily& fam) {
    return {[fam](Index, Index, const FiniteSet& f) { return is_full(fam, f) ? std::string() : std::string("not globally full"); },
            [](Index, Index, const AutomatonState& fin, Index) { return fin.cap > 0; }};
}

// kS1: E_1..E_{k-1} full Schreier; S2: E_1..E_{a-1} full Schreier.
inline WindowLemma block_window_lemma(const RegularFamily& fam) {
    const bool ks1 = fam.kind() == RegularFamily::Kind::ks1;
    auto need = [fam, ks1](Index a) -> std::uint64_t { return ks1 ? fam.k() - 1 : a - 1; };
    return {[need](Index a, Index, const FiniteSet& f) {
                auto blocks = decompose_schreier(f);
                for (std::uint64_t i = 0; i < need(a); ++i)
                    if (i >= blocks.size() || !detail::full_schreier(blocks[i]))
                        return "E_" + std::to_string(i + 1) + " is not a full Schreier set";
                return std::string();
            },
            [need](Index a, Index, const AutomatonState& fin, Index) { return detail::full_blocks(fin, need(a)) < need(a); }};
}

// 2S1: E_1 full Schreier and min E_2 <= b/2 + 2.
inline WindowLemma two_s1_window_lemma() {
    return {[](Index, Index b, const FiniteSet& f) {
                auto blocks = decompose_schreier(f);
                if (!detail::full_schreier(blocks[0])) return std::string("E_1 is not a full Schreier set");
                if (blocks.size() < 2) return std::string("E_2 is empty");
                if (2 * blocks[1].min() > b + 4) return "min E_2 = " + std::to_string(blocks[1].min()) + " > b/2 + 2";
                return std::string();
            },
            [](Index, Index b, const AutomatonState& fin, Index min_e2) {
                return detail::full_blocks(fin, 1) < 1 || min_e2 == 0 || 2 * min_e2 > b + 4;
            }};
}

// S3: E*_1..E*_{a-1} are S2-full. Listed, not counted.
inline WindowLemma s3_window_lemma() {
    return {[](Index a, Index, const FiniteSet& f) {
                auto blocks = decompose_s2(f);
                for (Index i = 0; i + 1 < a; ++i)
                    if (i >= blocks.size() || !is_full(RegularFamily::s2(), blocks[i])) return "E*_" + std::to_string(i + 1) + " is not S2-full";
                return std::string();
            },
            nullptr};
}

inline ScanReport sphi_window_scan(const RegularFamily& fam, Index bound) {
    if (fam.kind() != RegularFamily::Kind::sphi) throw PreconditionError("sphi_window_scan: needs an S_phi family");
    return full_window_scan(fam, bound, "full-window/" + fam.name(), sphi_window_lemma(fam));
}

inline ScanReport block_window_scan(const RegularFamily& fam, Index bound) {
    if (fam.kind() != RegularFamily::Kind::ks1 && fam.kind() != RegularFamily::Kind::s2)
        throw PreconditionError("block_window_scan: needs kS1 or S2");
    return full_window_scan(fam, bound, "full-window-blocks/" + fam.name(), block_window_lemma(fam));
}

inline ScanReport two_s1_window_scan(Index bound) {
    return full_window_scan(RegularFamily::ks1(2), bound, "full-window-e2/ks1:2", two_s1_window_lemma());
}

inline ScanReport s3_window_scan(Index bound) { return full_window_scan(RegularFamily::s3(), bound, "full-window-blocks/s3", s3_window_lemma()); }

// The full-set statements attached to each family.
inline std::vector<ScanReport> full_set_lemma_suite(const RegularFamily& fam, Index bound) {
    switch (fam.kind()) {
        case RegularFamily::Kind::sphi: return {sphi_window_scan(fam, std::min<Index>(bound, 30))};
        case RegularFamily::Kind::ks1: {
            std::vector<ScanReport> out{block_window_scan(fam, std::min<Index>(bound, 40))};
            if (fam.k() == 2) out.push_back(two_s1_window_scan(std::min<Index>(bound, 40)));
            return out;
        }
        case RegularFamily::Kind::s2:
            return {full_sequence_scan(RegularFamily::s1(), bound, SequenceReading::literal),
                    block_window_scan(fam, std::min<Index>(bound, 24))};
        case RegularFamily::Kind::s3:
            return {full_sequence_scan(RegularFamily::s2(), bound, SequenceReading::literal),
                    s3_window_scan(std::min<Index>(bound, 12)), s3_packing_scan(4, 3)};
    }
    return {};
}

inline ScanReport full_set_lemma_scan(const RegularFamily& fam, Index bound) {
    ScanReport r{"full-set-lemmas/" + fam.name(), "", 0, 0, {}, false};
    for (const auto& part : full_set_lemma_suite(fam, bound)) {
        r.universe += (r.universe.empty() ? "" : "; ") + part.suite + ": " + part.universe;
        r.absorb(part);
    }
    return r;
}

struct SampleOptions {
    std::size_t samples = 200;
    std::size_t span_bound = 8;
    Index start_max = 1;  // spans start in [1, start_max]
    std::uint64_t seed = 20261015;
    unsigned threads = 1;
};

// Random nonnegative dyadic vectors with span inside [lo, lo + span_bound - 1].
inline std::vector<Vector> sample_vectors(const SampleOptions& o) {
    if (o.span_bound < 1 || o.span_bound > FunctionalSearch::max_span || o.start_max < 1)
        throw PreconditionError("sample_vectors: need 1 <= span_bound <= " + std::to_string(FunctionalSearch::max_span));
    std::mt19937_64 rng(o.seed);
    std::uniform_int_distribution<Index> start(1, o.start_max);
    std::uniform_int_distribution<std::size_t> len(1, o.span_bound);
    std::uniform_int_distribution<int> num(0, 9), ex(0, 3);
    std::vector<Vector> out;
    for (std::size_t i = 0; i < o.samples; ++i) {
        const Index lo = start(rng), n = len(rng);
        Vector x;
        for (Index e = lo; e < lo + n; ++e)
            if (int v = num(rng); v > 0) x.set(e, Dyadic(BigNat(v), static_cast<std::uint32_t>(ex(rng))));
        if (x.empty()) x.set(lo, Dyadic(1));
        out.push_back(std::move(x));
    }
    return out;
}

// Engine value and j against exhaustive search over W(F) on sampled vectors.
inline ScanReport engine_soundness_scan(const RegularFamily& fam, const SampleOptions& o) {
    ScanReport r{"engine-soundness/" + fam.name(),
                 std::to_string(o.samples) + " vectors, span <= " + std::to_string(o.span_bound) + ", seed " + std::to_string(o.seed), 0,
                 0, {}, false};
    const auto xs = sample_vectors(o);
    std::vector<std::string> bad(xs.size());
    parallel_for(xs.size(), o.threads, [&](std::size_t i) {
        const auto res = norm(fam, xs[i], NormOptions{1, 400});
        if (res.j > FunctionalSearch::max_depth) {
            bad[i] = "j=" + std::to_string(res.j) + " beyond the search depth";
            return;
        }
        FunctionalSearch search(fam, xs[i], std::max(1u, res.j));
        if (search.best(search.depth_cap()) != res.value)
            bad[i] = "norm " + res.value.to_string() + " vs search " + search.best(search.depth_cap()).to_string();
        else if (search.min_depth() != res.j)
            bad[i] = "j=" + std::to_string(res.j) + " vs least optimal depth " + std::to_string(search.min_depth());
    });
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ++r.cases;
        if (!bad[i].empty()) r.violation(xs[i].to_string() + ": " + bad[i]);
    }
    return r;
}

// Some maximal-value functional has depth <= 1 or a window-full top start set; and j <= 1
// whenever the span interval is a member.
inline ScanReport force_star_scan(const RegularFamily& fam, const SampleOptions& o) {
    ScanReport r{"force-star/" + fam.name(),
                 std::to_string(o.samples) + " vectors, span <= " + std::to_string(o.span_bound) + ", seed " + std::to_string(o.seed), 0,
                 0, {}, false};
    const auto xs = sample_vectors(o);
    std::vector<std::string> bad(xs.size());
    parallel_for(xs.size(), o.threads, [&](std::size_t i) {
        const auto& x = xs[i];
        const auto res = norm(fam, x, NormOptions{1, 400});
        if (res.j > FunctionalSearch::max_depth) {
            bad[i] = "j beyond the search depth";
            return;
        }
        FunctionalSearch search(fam, x, std::max(1u, res.j));
        if (!search.has_shallow_or_full_optimum()) bad[i] = "no optimum of depth <= 1 or with full start set";
        else if (member(fam, FiniteSet::interval(x.span_lo(), x.span_hi())) && res.j > 1)
            bad[i] = "span is a member but j=" + std::to_string(res.j);
    });
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ++r.cases;
        if (!bad[i].empty()) r.violation(xs[i].to_string() + ": " + bad[i]);
    }
    return r;
}

// Subset monotonicity over 1 <= c <= a <= b <= d <= b_max and translation monotonicity over
// a <= a_max, a <= b <= b_max, 1 <= t <= t_max.
inline ScanReport hatj_property_scan(const Phi& phi, Index a_max, Index b_max, Index t_max) {
    ScanReport r{"hat-j/" + phi.descriptor(),
                 "subsets in [1," + std::to_string(b_max) + "]; shifts a <= " + std::to_string(a_max) + ", b <= " +
                     std::to_string(b_max) + ", t <= " + std::to_string(t_max),
                 0, 0, {}, false};
    const Index top = b_max + t_max;
    std::vector<std::vector<std::uint64_t>> v(top + 1, std::vector<std::uint64_t>(top + 1, 0));
    for (Index a = 1; a <= top; ++a)
        for (Index b = a; b <= top; ++b) v[a][b] = hat_j(phi, a, b);
    auto pair = [](Index a, Index b) { return detail::window(a, b); };
    for (Index c = 1; c <= b_max; ++c)
        for (Index d = c; d <= b_max; ++d)
            for (Index a = c; a <= d; ++a)
                for (Index b = a; b <= d; ++b) {
                    ++r.cases;
                    if (v[a][b] > v[c][d]) r.violation("hat-j" + pair(a, b) + " > hat-j" + pair(c, d));
                }
    for (Index a = 1; a <= a_max; ++a)
        for (Index b = a; b <= b_max; ++b)
            for (Index t = 1; t <= t_max; ++t) {
                ++r.cases;
                if (v[a + t][b + t] > v[a][b]) r.violation("hat-j" + pair(a + t, b + t) + " > hat-j" + pair(a, b));
            }
    return r;
}

// hat-j(1, n) against the S_phi upper-bound formula.
inline ScanReport hatj_upper_scan(const Phi& phi, std::uint64_t n_max) {
    ScanReport r{"hat-j-upper/" + phi.descriptor(), "1 <= n <= " + std::to_string(n_max), 0, 0, {}, false};
    const auto fam = RegularFamily::sphi(phi);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        ++r.cases;
        auto h = hat_j(phi, 1, n);
        auto u = upper_bound(fam, n);
        if (h > u) r.violation("n=" + std::to_string(n) + ": hat-j=" + std::to_string(h) + " > " + std::to_string(u));
    }
    return r;
}

// Formula lower <= upper and upper nondecreasing for n <= n_max; for S1 also lower <= 2 ceil(sqrt n) + 4.
// Witnesses for d <= d_max that fit the engine budget must reach the formula lower bound at n_d = max F_1.
inline ScanReport sandwich_report(const RegularFamily& fam, std::uint64_t n_max, std::size_t d_max = 5) {
    if (n_max < 1 || n_max > 1'000'000) throw PreconditionError("sandwich_report: n_max must be in [1, 10^6]");
    ScanReport r{"sandwich/" + fam.name(), "1 <= n <= " + std::to_string(n_max) + "; witnesses d <= " + std::to_string(d_max), 0, 0,
                 {}, false};
    std::uint64_t prev_upper = 0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        ++r.cases;
        const auto lo = lower_bound(fam, n), up = upper_bound(fam, n);
        const std::string at = "n=" + std::to_string(n) + ": ";
        if (lo > up) r.violation(at + "lower " + std::to_string(lo) + " > upper " + std::to_string(up));
        if (up < prev_upper) r.violation(at + "upper decreased");
        if (fam.is_s1() && lo > 2 * detail::ceil_sqrt(n) + 4) r.violation(at + "lower above 2 ceil(sqrt n) + 4");
        prev_upper = up;
    }
    for (std::size_t d = 1; d <= d_max; ++d) {
        std::optional<WitnessCertificate> cert;
        try {
            cert = certify_witness(fam, d, NormOptions{1, 400});
        } catch (const ResourceError&) {
            break;
        } catch (const VerificationError& e) {
            r.violation("witness d=" + std::to_string(d) + ": " + e.what());
            continue;
        }
        ++r.cases;
        const Index n_d = cert->chain.sets.front().max();
        const auto lo = lower_bound(fam, n_d);
        if (cert->depth < lo)
            r.violation("witness d=" + std::to_string(d) + " at n=" + std::to_string(n_d) + " certifies " + std::to_string(cert->depth) +
                        " < formula lower " + std::to_string(lo));
    }
    return r;
}

// Every scan for one family at its default desk-scale budget.
inline std::vector<ScanReport> default_suite(const RegularFamily& fam, unsigned threads = 1) {
    std::vector<ScanReport> out;
    const bool ks1 = fam.kind() == RegularFamily::Kind::ks1;
    const bool s2 = fam.kind() == RegularFamily::Kind::s2;
    out.push_back(insertion_scan(fam, ks1 ? 40 : s2 ? 20 : 25));
    out.push_back(strong_scan(fam, 25));
    for (auto& rep : full_set_lemma_suite(fam, s2 ? 24 : ks1 ? 40 : 30)) out.push_back(std::move(rep));
    if (fam.is_s1()) {
        SampleOptions o;
        o.threads = threads;
        out.push_back(force_star_scan(fam, o));
        o.samples = 500;
        out.push_back(engine_soundness_scan(fam, o));
    }
    if (fam.kind() == RegularFamily::Kind::sphi) out.push_back(hatj_property_scan(fam.phi(), 40, 80, 10));
    out.push_back(sandwich_report(fam, 100000));
    return out;
}

}  // namespace tsirelson
