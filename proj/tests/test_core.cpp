#include <symext/core.hpp>

#include <gtest/gtest.h>

#include <map>
#include <set>

using namespace symext;

namespace {

const Universe& two_by_two()
{
    return Universe::intern({"a", "b"}, {{2, 2}, {2, 2}}, 8);
}

Condition cond(const Universe& u, std::vector<Assignment> e) { return Condition::make(u, std::move(e)); }

// Plain map view used as the reference semantics for conditions.
std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, bool> as_map(const Condition& p)
{
    std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, bool> m;
    for (const auto& a : p.entries()) {
        m[{a.cell.site, a.cell.fiber, a.cell.slot}] = a.bit;
    }
    return m;
}

std::uint64_t binom(std::uint64_t n, std::uint64_t k)
{
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

} // namespace

TEST(Universe, InternIsIdempotent)
{
    const auto& u = two_by_two();
    EXPECT_EQ(&u, &Universe::intern({"a", "b"}, {{2, 2}, {2, 2}}, 8));
    EXPECT_EQ(u.cell_count(), 8u);
    EXPECT_EQ(u.site_of("b"), 1u);
    EXPECT_FALSE(u.site_of("c"));
    for (std::size_t i = 0; i < u.cell_count(); ++i) {
        EXPECT_EQ(u.cell_index(u.cell_at(i)), i);
    }
}

TEST(Universe, RejectsMalformed)
{
    EXPECT_THROW(Universe::intern({}, {}, 1), InvalidInstance);
    EXPECT_THROW(Universe::intern({"a"}, {{2, 2}, {2, 2}}, 1), InvalidInstance);
}

TEST(Condition, NormalizesAndRejects)
{
    const auto& u = two_by_two();
    auto p = cond(u, {{{1, 0, 0}, true}, {{0, 1, 1}, false}});
    EXPECT_EQ(p.to_string(), "[a:1:1=0,b:0:0=1]");
    EXPECT_EQ(p, cond(u, {{{0, 1, 1}, false}, {{1, 0, 0}, true}}));
    EXPECT_THROW(cond(u, {{{0, 0, 0}, true}, {{0, 0, 0}, false}}), InvalidCondition);
    EXPECT_THROW(cond(u, {{{0, 2, 0}, true}}), InvalidCondition);
    EXPECT_EQ(Condition().to_string(), "1");
}

TEST(Condition, DomainCutoff)
{
    const auto& u = Universe::intern({"a"}, {{2, 2}}, 1);
    EXPECT_NO_THROW(cond(u, {{{0, 0, 0}, true}}));
    EXPECT_THROW(cond(u, {{{0, 0, 0}, true}, {{0, 0, 1}, true}}), CutoffExceeded);
}

TEST(Extends, Examples)
{
    const auto& u = two_by_two();
    const auto q = cond(u, {{{0, 0, 0}, true}});
    EXPECT_TRUE(extends(cond(u, {{{0, 0, 0}, true}, {{0, 0, 1}, false}}), q));
    EXPECT_TRUE(extends(q, Condition()));
    EXPECT_FALSE(extends(cond(u, {{{0, 0, 0}, false}}), q));
}

TEST(Compatible, Examples)
{
    const auto& u = two_by_two();
    auto c = compatible(cond(u, {{{0, 0, 0}, true}}), cond(u, {{{1, 0, 0}, true}}));
    ASSERT_TRUE(c.compatible);
    EXPECT_EQ(c.witness->size(), 2u);
    EXPECT_FALSE(compatible(cond(u, {{{0, 0, 0}, true}}), cond(u, {{{0, 0, 0}, false}})).compatible);
}

TEST(Compatible, MergeBeyondCutoffIsFlagged)
{
    const auto& u = Universe::intern({"a"}, {{2, 2}}, 1);
    auto c = compatible(cond(u, {{{0, 0, 0}, true}}), cond(u, {{{0, 1, 0}, true}}));
    EXPECT_TRUE(c.compatible);
    EXPECT_TRUE(c.cutoff_exceeded);
}

TEST(Order, AgreesWithMapSemanticsOnAllPairs)
{
    const auto& u = two_by_two();
    const auto all = all_conditions(u, 2);
    for (const auto& p : all) {
        const auto mp = as_map(p);
        for (const auto& q : all) {
            const auto mq = as_map(q);
            bool sub = true;
            bool agree = true;
            for (const auto& [k, v] : mq) {
                auto it = mp.find(k);
                sub = sub && it != mp.end() && it->second == v;
                agree = agree && (it == mp.end() || it->second == v);
            }
            ASSERT_EQ(extends(p, q), sub) << p.to_string() << " vs " << q.to_string();
            auto c = compatible(p, q);
            ASSERT_EQ(c.compatible, agree);
            if (agree) {
                EXPECT_TRUE(extends(*c.witness, p) && extends(*c.witness, q));
                EXPECT_EQ(c.witness->size(), [&] {
                    auto m = mp;
                    m.insert(mq.begin(), mq.end());
                    return m.size();
                }());
            }
        }
    }
}

TEST(Order, PartialOrderLaws)
{
    const auto& u = two_by_two();
    const auto all = all_conditions(u, 2);
    for (const auto& p : all) {
        EXPECT_TRUE(extends(p, p));
        EXPECT_TRUE(extends(p, Condition()));
        for (const auto& q : all) {
            if (p != q && extends(p, q)) {
                EXPECT_FALSE(extends(q, p));
            }
        }
    }
    for (std::size_t i = 0; i < all.size(); i += 7) {
        for (std::size_t j = 0; j < all.size(); j += 5) {
            for (std::size_t k = 0; k < all.size(); k += 11) {
                if (extends(all[i], all[j]) && extends(all[j], all[k])) {
                    EXPECT_TRUE(extends(all[i], all[k]));
                }
            }
        }
    }
}

TEST(Enumeration, ConditionCountMatchesBinomialFormula)
{
    const auto& u = two_by_two();
    for (std::size_t k = 0; k <= 3; ++k) {
        std::uint64_t expected = 0;
        for (std::size_t j = 0; j <= k; ++j) {
            expected += binom(8, j) << j;
        }
        const auto all = all_conditions(u, k);
        EXPECT_EQ(all.size(), expected);
        std::set<Condition> unique(all.begin(), all.end());
        EXPECT_EQ(unique.size(), all.size());
    }
}

TEST(Enumeration, EastonBoundsFilterConditions)
{
    const auto& u = Universe::intern({"s3", "s4"}, {{3, 1}, {4, 1}}, 7, {1, 2});
    for (const auto& p : all_conditions(u, 3)) {
        std::size_t low = 0;
        for (const auto& a : p.entries()) {
            low += a.cell.site == 0 ? 1 : 0;
        }
        EXPECT_LE(low, 1u);
        EXPECT_LE(p.size(), 2u);
    }
}

TEST(Generics, Counts)
{
    const auto& one = Universe::intern({"a"}, {{1, 1}}, 1);
    EXPECT_EQ(enumerate_generics(one).size(), 2u);
    const auto& two = Universe::intern({"a"}, {{1, 2}}, 2);
    EXPECT_EQ(enumerate_generics(two, cond(two, {{{0, 0, 0}, true}})).size(), 2u);
    const auto& u = two_by_two();
    std::set<std::vector<std::uint8_t>> seen;
    for (auto g : enumerate_generics(u)) {
        seen.insert(std::vector<std::uint8_t>(g.bits().begin(), g.bits().end()));
    }
    EXPECT_EQ(seen.size(), 256u);
}

TEST(Generics, BelowConditionIsRespected)
{
    const auto& u = two_by_two();
    const auto p = cond(u, {{{0, 1, 0}, true}, {{1, 0, 1}, false}});
    std::size_t n = 0;
    for (auto g : enumerate_generics(u, p)) {
        EXPECT_TRUE(g.contains(p));
        ++n;
    }
    EXPECT_EQ(n, 64u);
}

TEST(Generics, FilterIsUpClosureOfTotal)
{
    const auto& u = two_by_two();
    const auto all = all_conditions(u, 2);
    for (auto g : enumerate_generics(u)) {
        for (const auto& p : all) {
            bool agrees = true;
            for (const auto& a : p.entries()) {
                agrees = agrees && g.value(a.cell) == a.bit;
            }
            ASSERT_EQ(g.contains(p), agrees);
        }
        if (g.bits()[0] == 1 && g.bits()[7] == 0) {
            break;
        }
    }
}

TEST(Generics, PersistenceAcrossExtensions)
{
    const auto& u = two_by_two();
    const auto all = all_conditions(u, 2);
    for (auto g : enumerate_generics(u)) {
        for (const auto& p : all) {
            if (!g.contains(p)) {
                continue;
            }
            for (const auto& q : all) {
                if (extends(p, q)) {
                    ASSERT_TRUE(g.contains(q));
                }
            }
        }
    }
}

TEST(Stages, RestrictAndCap)
{
    const auto& u = Universe::intern({"3", "4"}, {{3, 1}, {4, 1}}, 7, {2, 3});
    const auto p = cond(u, {{{0, 0, 0}, true}, {{1, 2, 0}, false}});
    const auto r = stage_restrict(p, 0);
    EXPECT_EQ(r.size(), 1u);
    EXPECT_TRUE(extends(p, r));
    std::vector<std::uint8_t> bits(7, 0);
    bits[0] = 1;
    GenericFilter g(u, bits);
    EXPECT_TRUE(g.contains(p));
    EXPECT_FALSE(g.restricted_to_stage(0).contains(p));
    EXPECT_TRUE(g.restricted_to_stage(0).contains(r));
}

TEST(Universe, MismatchDetected)
{
    const auto& u = two_by_two();
    const auto& w = Universe::intern({"x"}, {{2, 2}}, 4);
    EXPECT_THROW(extends(cond(u, {{{0, 0, 0}, true}}), cond(w, {{{0, 0, 0}, true}})), MismatchedInstance);
}
