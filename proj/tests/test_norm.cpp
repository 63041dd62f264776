#include <gtest/gtest.h>

#include <map>
#include <random>
#include <tuple>

#include "tsirelson/enumerate.hpp"
#include "tsirelson/norm_engine.hpp"

using namespace tsirelson;

namespace {

Vector vec(const char* s) { return Vector::parse(s); }

const Vector witness2 = Vector::parse("3:8,4:1,5:1,6:1,7:1,8:8");

// Reference level recursion: partitions explored by a memoized search over
// (next start, automaton state), independent of the nested-capacity DP.
class FlatReference {
public:
    FlatReference(const RegularFamily& fam, const Vector& x) : fam_(fam), x_(x), lo_(x.span_lo()), hi_(x.span_hi()) {
        std::map<std::pair<Index, Index>, Dyadic> t;
        for (Index a = lo_; a <= hi_; ++a) {
            Dyadic m;
            for (Index b = a; b <= hi_; ++b) t[{a, b}] = m = max(m, x.at(b));
        }
        levels_.push_back(std::move(t));
    }

    const std::map<std::pair<Index, Index>, Dyadic>& level(unsigned m) {
        while (levels_.size() <= m) advance();
        return levels_[m];
    }

private:
    using Key = std::tuple<Index, Index, bool, Index, std::uint64_t, std::uint64_t, std::uint64_t>;

    void advance() {
        const auto& prev = levels_.back();
        std::map<std::pair<Index, Index>, Dyadic> next;
        for (Index a = lo_; a <= hi_; ++a) {
            for (Index b = a; b <= hi_; ++b) {
                memo_.clear();
                Dyadic best;
                for (Index s = a; s <= b; ++s) {
                    auto st = fam_.step(AutomatonState{}, s);
                    if (st) best = max(best, pieces(prev, s, b, *st));
                }
                next[{a, b}] = max(prev.at({a, b}), best.halve());
            }
        }
        levels_.push_back(std::move(next));
    }

    // Best sum of pieces whose first piece starts at s (already accepted into st), inside [s,b].
    Dyadic pieces(const std::map<std::pair<Index, Index>, Dyadic>& prev, Index s, Index b, const AutomatonState& st) {
        Key key{s, b, st.started, st.last, st.outer, st.blocks, st.cap};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Dyadic best;
        for (Index r = s; r <= b; ++r) {
            Dyadic here = prev.at({s, r});
            Dyadic tail;
            for (Index p = r + 1; p <= b; ++p) {
                auto nst = fam_.step(st, p);
                if (nst) tail = max(tail, pieces(prev, p, b, *nst));
            }
            best = max(best, here + tail);
        }
        memo_[key] = best;
        return best;
    }

    RegularFamily fam_;
    Vector x_;
    Index lo_, hi_;
    std::vector<std::map<std::pair<Index, Index>, Dyadic>> levels_;
    std::map<Key, Dyadic> memo_;
};

Vector random_vector(std::mt19937_64& rng, Index lo, Index hi) {
    std::uniform_int_distribution<int> num(0, 9), ex(0, 3);
    Vector x;
    for (Index i = lo; i <= hi; ++i) {
        int v = num(rng);
        if (v > 0) x.set(i, Dyadic(BigNat(v), static_cast<std::uint32_t>(ex(rng))));
    }
    if (x.empty()) x.set(lo, Dyadic(1));
    return x;
}

std::vector<RegularFamily> small_families() {
    return {RegularFamily::s1(), RegularFamily::sphi(Phi::power(2)), RegularFamily::ks1(2), RegularFamily::ks1(3),
            RegularFamily::s2(), RegularFamily::s3()};
}

}  // namespace

TEST(NormExamples, UnitVector) {
    auto e5 = vec("5:1");
    NormEngine eng(RegularFamily::s1(), e5);
    EXPECT_EQ(eng.result().value, Dyadic(1));
    EXPECT_EQ(eng.result().j, 0u);
    EXPECT_EQ(eng.realizing_functional(), FunctionalTree::leaf(5));
}

TEST(NormExamples, ThreeOnes) {
    auto x = Vector::indicator(FiniteSet::parse("3,4,5"));
    NormEngine eng(RegularFamily::s1(), x);
    EXPECT_EQ(eng.result().value, Dyadic(3, 1));
    EXPECT_EQ(eng.result().j, 1u);
    EXPECT_EQ(eng.realizing_functional().to_string(), "(3 4 5)");
}

TEST(NormExamples, DepthTwoWitness) {
    NormEngine eng(RegularFamily::s1(), witness2);
    EXPECT_EQ(eng.result().value, Dyadic(9));
    EXPECT_EQ(eng.result().j, 2u);
    auto f = eng.realizing_functional();
    EXPECT_EQ(f.to_string(), "(3 (4 5 6 7) 8)");
    EXPECT_EQ(f.evaluate(witness2), Dyadic(9));
    EXPECT_TRUE(f.validate(RegularFamily::s1()));
}

TEST(NormExamples, LevelTables) {
    auto s1 = RegularFamily::s1();
    auto x = Vector::indicator(FiniteSet::interval(2, 4));
    auto t1 = norm_level_table(s1, x, level_zero_table(x));
    EXPECT_EQ(t1.at(2, 4), Dyadic(1));
    auto y = Vector::indicator(FiniteSet::interval(3, 6));
    EXPECT_EQ(norm_level_table(s1, y, level_zero_table(y)).at(3, 6), Dyadic(3, 1));
    auto e7 = vec("7:5/2^2");
    auto t = level_zero_table(e7);
    for (int m = 0; m < 3; ++m) {
        EXPECT_EQ(t.at(7, 7), Dyadic(5, 2));
        t = norm_level_table(s1, e7, t);
    }
}

TEST(NormExamples, EvaluateAndValidate) {
    auto s1 = RegularFamily::s1();
    EXPECT_EQ(FunctionalTree::leaf(3).evaluate(witness2), Dyadic(8));
    EXPECT_EQ(FunctionalTree::parse("(3 4 5)").evaluate(Vector::indicator(FiniteSet::parse("3,4,5"))), Dyadic(3, 1));
    EXPECT_EQ(FunctionalTree::parse("(1)").evaluate(vec("1:1")), Dyadic(1, 1));
    EXPECT_FALSE(FunctionalTree::parse("(2 3 4)").validate(s1));
    EXPECT_TRUE(FunctionalTree::parse("(3 4 8)").validate(s1));
    EXPECT_FALSE(FunctionalTree::parse("(5 4)").validate(s1));
}

TEST(NormExamples, FunctionalLiteralRoundTrip) {
    for (const char* s : {"5", "(3 (4 5 6 7) 8)", "((2) (3 4))"}) {
        auto f = FunctionalTree::parse(s);
        EXPECT_EQ(f.to_string(), s);
        EXPECT_EQ(FunctionalTree::parse(f.to_string()), f);
    }
    EXPECT_THROW(FunctionalTree::parse("(3 4"), ParseError);
    EXPECT_THROW(FunctionalTree::parse("()"), ParseError);
    EXPECT_THROW(FunctionalTree::parse("(3 x)"), ParseError);
}

TEST(Enumerate, Examples) {
    auto s1 = RegularFamily::s1();
    auto e3 = enumerate_norming(s1, vec("3:1"), 0);
    ASSERT_EQ(e3.size(), 1u);
    EXPECT_EQ(e3[0], FunctionalTree::leaf(3));

    auto x = Vector::indicator(FiniteSet::parse("3,4,5"));
    auto all = enumerate_norming(s1, x, 1);
    EXPECT_NE(std::find(all.begin(), all.end(), FunctionalTree::parse("(3 4 5)")), all.end());
    for (const auto& f : all) EXPECT_EQ(f.evaluate(x), Dyadic(3, 1));

    auto flat = Vector::indicator(FiniteSet::interval(2, 4));
    auto opt = enumerate_norming(s1, flat, 2);
    EXPECT_NE(std::find(opt.begin(), opt.end(), FunctionalTree::leaf(2)), opt.end());
    for (const auto& f : opt) {
        EXPECT_EQ(f.evaluate(flat), Dyadic(1));
        EXPECT_TRUE(f.validate(s1));
        EXPECT_LE(f.depth(), 2u);
    }
}

TEST(Enumerate, WitnessOptimaAndDepthProfile) {
    FunctionalSearch search(RegularFamily::s1(), witness2, 3);
    EXPECT_EQ(search.best(0), Dyadic(8));
    EXPECT_EQ(search.best(3), Dyadic(9));
    EXPECT_EQ(search.min_depth(), 2u);
    auto opt = search.optima(1000);
    EXPECT_NE(std::find(opt.begin(), opt.end(), FunctionalTree::parse("(3 (4 5 6 7) 8)")), opt.end());
}

TEST(Enumerate, BudgetIsEnforced) {
    auto wide = Vector::indicator(FiniteSet::interval(1, 13));
    EXPECT_THROW(FunctionalSearch(RegularFamily::s1(), wide, 2), ResourceError);
    EXPECT_THROW(FunctionalSearch(RegularFamily::s1(), vec("1:1"), 5), ResourceError);
}

TEST(NormProperties, MatchesExhaustiveSearchAndFlatReference) {
    std::mt19937_64 rng(20261015);
    for (const auto& fam : small_families()) {
        for (int trial = 0; trial < 40; ++trial) {
            Index lo = 1 + rng() % 4;
            auto x = random_vector(rng, lo, lo + rng() % 7);
            NormEngine eng(fam, x);
            FunctionalSearch search(fam, x, 4);
            FlatReference flat(fam, x);
            const auto& r = eng.result();
            ASSERT_LE(r.j, 4u) << fam.name() << " " << x.to_string();
            EXPECT_EQ(r.value, search.best(4)) << fam.name() << " " << x.to_string();
            EXPECT_EQ(r.j, search.min_depth()) << fam.name() << " " << x.to_string();
            for (unsigned m = 0; m <= 4; ++m) {
                auto table = eng.table(m);
                EXPECT_EQ(table.at(x.span_lo(), x.span_hi()), search.best(m)) << fam.name() << " level " << m;
                for (const auto& [ab, v] : flat.level(m))
                    ASSERT_EQ(table.at(ab.first, ab.second), v) << fam.name() << " " << x.to_string() << " level " << m;
            }
        }
    }
}

TEST(NormProperties, RealizingFunctionalIsRealizing) {
    std::mt19937_64 rng(7);
    for (const auto& fam : small_families()) {
        for (int trial = 0; trial < 60; ++trial) {
            auto x = random_vector(rng, 1 + rng() % 5, 6 + rng() % 10);
            NormEngine eng(fam, x);
            auto f = eng.realizing_functional();
            EXPECT_TRUE(f.validate(fam)) << f.to_string();
            EXPECT_EQ(f.evaluate(x), eng.result().value) << fam.name() << " " << x.to_string();
            EXPECT_EQ(f.depth(), eng.result().j) << f.to_string();
            EXPECT_GE(f.min_support(), x.span_lo());
            EXPECT_LE(f.max_support(), x.span_hi());
        }
    }
}

TEST(NormProperties, TablesAreMonotoneAndStable) {
    std::mt19937_64 rng(11);
    for (const auto& fam : small_families()) {
        for (int trial = 0; trial < 15; ++trial) {
            auto x = random_vector(rng, 2, 9 + rng() % 6);
            NormEngine eng(fam, x);
            const unsigned top = eng.stable_level();
            for (unsigned m = 0; m <= top; ++m) {
                auto t = eng.table(m), u = eng.table(m + 1);
                for (Index a = x.span_lo(); a <= x.span_hi(); ++a) {
                    for (Index b = a; b <= x.span_hi(); ++b) {
                        EXPECT_LE(t.at(a, b), u.at(a, b));
                        if (a > x.span_lo()) { EXPECT_LE(t.at(a, b), t.at(a - 1, b)); }
                        if (b < x.span_hi()) { EXPECT_LE(t.at(a, b), t.at(a, b + 1)); }
                    }
                }
            }
            auto fixed = eng.table(top);
            auto again = norm_level_table(fam, x, fixed);
            for (Index a = x.span_lo(); a <= x.span_hi(); ++a)
                for (Index b = a; b <= x.span_hi(); ++b) EXPECT_EQ(again.at(a, b), fixed.at(a, b));
        }
    }
}

TEST(NormProperties, ZeroingAndScaling) {
    std::mt19937_64 rng(13);
    const Dyadic c(BigNat(3), 2);
    for (const auto& fam : small_families()) {
        for (int trial = 0; trial < 20; ++trial) {
            auto x = random_vector(rng, 1, 6 + rng() % 8);
            auto r = norm(fam, x);
            auto scaled = norm(fam, x.scaled(c));
            EXPECT_EQ(scaled.value, r.value * c);
            EXPECT_EQ(scaled.j, r.j);
            if (x.support_size() > 1) {
                Vector y = x;
                auto it = std::next(x.entries().begin(), static_cast<long>(rng() % x.support_size()));
                y.set(it->first, Dyadic{});
                EXPECT_LE(norm(fam, y).value, r.value);
            }
        }
    }
}

TEST(NormProperties, WideIntegersAgreeWithNarrow) {
    auto big = witness2.scaled(Dyadic(pow2(140), 0));
    auto r = norm(RegularFamily::s1(), big);
    EXPECT_EQ(r.value, Dyadic(9) * Dyadic(pow2(140), 0));
    EXPECT_EQ(r.j, 2u);
    auto tiny = witness2.scaled(Dyadic(1, 130));
    EXPECT_EQ(norm(RegularFamily::s1(), tiny).value, Dyadic(9, 130));
}

TEST(NormProperties, ThreadCountDoesNotChangeResults) {
    std::mt19937_64 rng(17);
    auto x = random_vector(rng, 1, 40);
    for (const auto& fam : small_families()) {
        NormEngine one(fam, x, {.threads = 1});
        NormEngine four(fam, x, {.threads = 4});
        EXPECT_EQ(one.result().value, four.result().value);
        EXPECT_EQ(one.result().j, four.result().j);
        EXPECT_EQ(one.realizing_functional(), four.realizing_functional());
        EXPECT_EQ(one.table(one.stable_level()), four.table(four.stable_level()));
    }
}

TEST(NormErrors, Preconditions) {
    EXPECT_THROW(NormEngine(RegularFamily::s1(), Vector{}), PreconditionError);
    auto wide = vec("1:1,500:1");
    EXPECT_THROW(NormEngine(RegularFamily::s1(), wide), ResourceError);
    EXPECT_NO_THROW(NormEngine(RegularFamily::s1(), wide, {.max_span = 600}));
}
