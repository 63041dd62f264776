#include <gtest/gtest.h>

#include <vector>

#include "tsirelson/family.hpp"
#include "tsirelson/member_oracle.hpp"

using namespace tsirelson;

namespace {

FiniteSet from_mask(std::uint32_t mask, Index base = 1) {
    std::vector<Index> v;
    for (Index i = 0; i < 32; ++i)
        if (mask >> i & 1u) v.push_back(base + i);
    return FiniteSet(std::move(v));
}

std::vector<RegularFamily> all_families() {
    return {RegularFamily::s1(), RegularFamily::sphi(Phi::power(2)), RegularFamily::sphi(Phi::exponential(2)),
            RegularFamily::ks1(2), RegularFamily::ks1(3), RegularFamily::s2(), RegularFamily::s3()};
}

FiniteSet concat(const std::vector<FiniteSet>& parts) {
    std::vector<Index> v;
    for (const auto& p : parts) v.insert(v.end(), p.begin(), p.end());
    return FiniteSet(std::move(v));
}

}  // namespace

TEST(FiniteSetLiteral, ParseAndFormat) {
    auto f = FiniteSet::parse("2,99,100-199");
    EXPECT_EQ(f.size(), 102u);
    EXPECT_EQ(f.min(), 2u);
    EXPECT_EQ(f.max(), 199u);
    EXPECT_EQ(FiniteSet::parse(f.to_string()), f);
    EXPECT_EQ(FiniteSet({3, 4, 8}).to_string(), "3,4,8");
    EXPECT_EQ(FiniteSet::interval(4, 7).to_string(), "4-7");
    EXPECT_TRUE(FiniteSet::parse("").empty());
    EXPECT_THROW(FiniteSet::parse("3,2"), ParseError);
    EXPECT_THROW(FiniteSet::parse("0"), ParseError);
    EXPECT_THROW(FiniteSet::parse("a"), ParseError);
    EXPECT_THROW(FiniteSet::parse("5-3"), ParseError);
}

TEST(BuildFamily, Grammar) {
    EXPECT_EQ(RegularFamily::parse("s1"), RegularFamily::parse("sphi:id"));
    EXPECT_EQ(RegularFamily::parse("ks1:2").k(), 2u);
    EXPECT_EQ(RegularFamily::parse("sphi:poly:2").name(), "sphi:poly:2");
    EXPECT_EQ(RegularFamily::parse("sphi:exp:3").name(), "sphi:exp:3");
    EXPECT_THROW(RegularFamily::parse("ks1:1"), ConstraintError);
    EXPECT_THROW(RegularFamily::parse("sphi:poly:0"), ConstraintError);
    EXPECT_THROW(RegularFamily::parse("sphi:exp:1"), ConstraintError);
    EXPECT_THROW(RegularFamily::parse("s4"), ParseError);
    EXPECT_THROW(RegularFamily::parse("ks1:x"), ParseError);
}

TEST(Member, Examples) {
    EXPECT_FALSE(member(RegularFamily::s1(), {2, 3, 4}));
    EXPECT_TRUE(member(RegularFamily::ks1(2), FiniteSet::parse("2,99,100-199")));
    EXPECT_FALSE(member(RegularFamily::ks1(2), FiniteSet::parse("19-39,99-199")));
    for (const auto& fam : all_families()) {
        EXPECT_TRUE(member(fam, {}));
        for (Index i = 1; i < 30; ++i) EXPECT_TRUE(member(fam, {i}));
    }
}

TEST(MemberOracle, Examples) {
    EXPECT_TRUE(member_oracle(RegularFamily::s2(), {4, 5, 6, 7}));
    EXPECT_FALSE(member_oracle(RegularFamily::s2(), {1, 2}));
    EXPECT_TRUE(member_oracle(RegularFamily::s3(), {}));
    EXPECT_THROW(member_oracle(RegularFamily::s2(), {25}), ResourceError);
}

TEST(Automaton, Examples) {
    auto s1 = RegularFamily::s1();
    AutomatonState st;
    for (Index n : {3, 5, 9}) {
        auto next = s1.step(st, n);
        ASSERT_TRUE(next);
        st = *next;
    }
    EXPECT_FALSE(s1.step(st, 12));
    EXPECT_THROW(s1.step(st, 9), PreconditionError);

    auto k2 = RegularFamily::ks1(2);
    AutomatonState t;
    for (Index n : {2, 3, 5, 6, 7, 8}) {
        auto next = k2.step(t, n);
        ASSERT_TRUE(next);
        t = *next;
    }

    auto s2 = RegularFamily::s2();
    auto one = s2.step({}, 1);
    ASSERT_TRUE(one);
    EXPECT_FALSE(s2.step(*one, 2));
}

// Greedy automaton against the definitional search, exhaustively.
TEST(MemberOracle, AgreesWithAutomatonOnSmallUniverse) {
    for (const auto& fam : all_families()) {
        const std::uint32_t bits = fam.kind() == RegularFamily::Kind::s3 ? 10 : 12;
        for (std::uint32_t m = 0; m < (1u << bits); ++m) {
            auto f = from_mask(m);
            ASSERT_EQ(member(fam, f), member_oracle(fam, f)) << fam.name() << " " << f.to_string();
        }
    }
}

TEST(Families, Hereditary) {
    for (const auto& fam : all_families()) {
        for (std::uint32_t m = 0; m < (1u << 11); ++m) {
            auto f = from_mask(m);
            if (!member(fam, f)) continue;
            for (Index e : f) ASSERT_TRUE(member(fam, f.without(e))) << fam.name() << " " << f.to_string();
        }
    }
}

TEST(Families, Spreading) {
    // Every pointwise-larger image of a member inside [1,14] is a member.
    for (const auto& fam : all_families()) {
        for (std::uint32_t m = 1; m < (1u << 12); ++m) {
            auto f = from_mask(m);
            if (!member(fam, f)) continue;
            for (std::uint32_t g = 1; g < (1u << 14); ++g) {
                if (static_cast<std::size_t>(__builtin_popcount(g)) != f.size()) continue;
                auto img = from_mask(g);
                bool larger = true;
                for (std::size_t i = 0; i < f.size() && larger; ++i) larger = img[i] >= f[i];
                if (larger) {
                    ASSERT_TRUE(member(fam, img)) << fam.name() << " " << f.to_string() << " -> " << img.to_string();
                }
            }
        }
    }
}

TEST(Families, IntervalsBelowRangeAreMembers) {
    for (const auto& fam : all_families()) {
        for (std::uint32_t m = 1; m < (1u << 20); m += (m < 4096 ? 1 : 97)) {
            auto f = from_mask(m);
            if (f.max() < range_capped(fam, f.min(), 64)) {
                ASSERT_TRUE(member(fam, f)) << fam.name() << " " << f.to_string();
            }
        }
    }
}

TEST(Range, Examples) {
    EXPECT_EQ(range(RegularFamily::s1(), 10), 20);
    EXPECT_EQ(range(RegularFamily::ks1(2), 10), 40);
    EXPECT_EQ(range(RegularFamily::s2(), 2), 8);
    EXPECT_EQ(range(RegularFamily::ks1(2), 2), 8);  // [2,7] is a union of two Schreier sets
    EXPECT_TRUE(member(RegularFamily::ks1(2), FiniteSet::interval(2, 7)));
}

TEST(Range, ScanMatchesClosedForms) {
    for (Index a = 1; a <= 10; ++a) {
        EXPECT_EQ(range_by_scan(RegularFamily::s1(), a), a + a);
        EXPECT_EQ(range_by_scan(RegularFamily::sphi(Phi::power(2)), a), a + a * a);
        EXPECT_EQ(range_by_scan(RegularFamily::sphi(Phi::exponential(2)), a), a + (Index{1} << a));
        EXPECT_EQ(range_by_scan(RegularFamily::ks1(2), a), 4 * a);
        EXPECT_EQ(range_by_scan(RegularFamily::ks1(3), a), 8 * a);
        EXPECT_EQ(range_by_scan(RegularFamily::s2(), a), (Index{1} << a) * a);
        for (const auto& fam : all_families()) {
            if (fam.kind() == RegularFamily::Kind::s3 && a > 2) continue;
            EXPECT_EQ(range(fam, a), range_by_scan(fam, a)) << fam.name() << " a=" << a;
            EXPECT_EQ(range_capped(fam, a, 5000), std::min<Index>(5000, range_by_scan(fam, a)));
        }
    }
}

TEST(Range, S3Sandwich) {
    auto s3 = RegularFamily::s3();
    EXPECT_EQ(range(s3, 1), 2);
    EXPECT_EQ(range(s3, 2), 2048);
    EXPECT_THROW(range(s3, 3), ResourceError);
    for (Index a = 1; a <= 3; ++a) {
        BigNat r = range(s3, a, std::uint64_t{1} << 30);
        EXPECT_NE(compare_tower(r, a, a), std::strong_ordering::less);
        EXPECT_NE(compare_tower(r, a, 3 * a), std::strong_ordering::greater);
    }
    EXPECT_EQ(range(s3, 3, std::uint64_t{1} << 30), (BigNat(24) << 24) << (24u << 24));
}

TEST(Decompose, Examples) {
    auto blocks = decompose_schreier(FiniteSet::interval(1, 10));
    ASSERT_EQ(blocks.size(), 4u);
    EXPECT_EQ(blocks[0], FiniteSet({1}));
    EXPECT_EQ(blocks[1], FiniteSet({2, 3}));
    EXPECT_EQ(blocks[2], FiniteSet({4, 5, 6, 7}));
    EXPECT_EQ(blocks[3], FiniteSet({8, 9, 10}));
    EXPECT_TRUE(decompose_schreier({}).empty());
    EXPECT_EQ(decompose_schreier({5, 9}).size(), 1u);

    auto star = decompose_s2(FiniteSet::interval(2, 9));
    ASSERT_EQ(star.size(), 2u);
    EXPECT_EQ(star[0], FiniteSet::interval(2, 7));
    EXPECT_EQ(star[1], FiniteSet({8, 9}));
    EXPECT_EQ(decompose_s2(FiniteSet::interval(3, 23)).size(), 1u);
    EXPECT_EQ(decompose_s2({7}).size(), 1u);
}

TEST(Decompose, ConcatenationReproducesSet) {
    for (std::uint32_t m = 0; m < (1u << 16); ++m) {
        auto f = from_mask(m);
        auto e = decompose_schreier(f);
        ASSERT_EQ(concat(e), f);
        for (std::size_t i = 0; i + 1 < e.size(); ++i) ASSERT_EQ(e[i].size(), e[i].min());
        ASSERT_EQ(concat(decompose_s2(f)), f);
    }
}

// Membership through the greedy blocks: E_{k+1} empty for kS1, E_{min+1} for S2, E*_{min+1} for S3.
TEST(Decompose, CharacterizesMembership) {
    for (std::uint32_t m = 1; m < (1u << 14); ++m) {
        auto f = from_mask(m);
        auto e = decompose_schreier(f);
        ASSERT_EQ(member(RegularFamily::ks1(2), f), e.size() <= 2);
        ASSERT_EQ(member(RegularFamily::ks1(3), f), e.size() <= 3);
        ASSERT_EQ(member(RegularFamily::s2(), f), e.size() <= f.min());
        ASSERT_EQ(member(RegularFamily::s3(), f), decompose_s2(f).size() <= f.min());
    }
}

TEST(Fullness, Examples) {
    auto s1 = RegularFamily::s1();
    auto k2 = RegularFamily::ks1(2);
    EXPECT_TRUE(is_full(s1, {3, 4, 5}));
    EXPECT_FALSE(is_full(s1, {7, 8, 9}));
    EXPECT_FALSE(is_full(k2, {2, 3, 5, 6, 7, 8}));
    EXPECT_TRUE(is_full_window(s1, 7, 9, {7, 8, 9}));
    EXPECT_TRUE(is_full_window(k2, 2, 8, {2, 3, 5, 6, 7, 8}));
    EXPECT_TRUE(is_full_window(s1, 3, 10, {3, 4, 5}));
    EXPECT_THROW(is_full(s1, {2, 3, 4}), PreconditionError);
    EXPECT_THROW(is_full_window(s1, 3, 10, {4, 5}), PreconditionError);
}

// Insertions far beyond max F behave like max F + 1.
TEST(Fullness, InsertionBoundIsRepresentative) {
    for (const auto& fam : all_families()) {
        for (std::uint32_t m = 1; m < (1u << 12); ++m) {
            auto f = from_mask(m);
            if (!member(fam, f)) continue;
            bool next = member_inserted(fam, f, f.max() + 1);
            for (Index far = f.max() + 2; far <= 24; ++far)
                ASSERT_EQ(member_inserted(fam, f, far), next) << fam.name() << " " << f.to_string();
            bool full_scan = true;
            for (Index n = 1; n <= 24; ++n)
                if (!f.contains(n) && member_oracle(fam, f.with(n))) full_scan = false;
            ASSERT_EQ(is_full(fam, f), full_scan) << fam.name() << " " << f.to_string();
        }
    }
}
