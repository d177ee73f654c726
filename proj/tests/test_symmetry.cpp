#include <symext/instances.hpp>
#include <symext/symmetry.hpp>

#include <gtest/gtest.h>

#include <numeric>
#include <set>

using namespace symext;

namespace {

const Universe& ref() { return Universe::intern({"a", "b"}, {{2, 2}, {2, 2}}, 8); }
const Universe& wide() { return Universe::intern({"a", "b"}, {{3, 2}, {3, 2}}, 12); }

// Every site-preserving fiber bijection that leaves E pointwise fixed,
// listed directly from per-site permutations rather than from generators.
std::vector<FiberPermutation> all_fixing(const Universe& u, const SupportSet& e)
{
    std::vector<std::vector<std::vector<std::uint32_t>>> per_site;
    for (std::uint32_t s = 0; s < u.site_count(); ++s) {
        std::vector<std::uint32_t> perm(u.shape(s).fibers);
        std::iota(perm.begin(), perm.end(), 0u);
        std::vector<std::vector<std::uint32_t>> ok;
        do {
            bool fixes = true;
            for (std::uint32_t f = 0; f < perm.size(); ++f) {
                if (e.contains({s, f}) && perm[f] != f) {
                    fixes = false;
                }
            }
            if (fixes) {
                ok.push_back(perm);
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        per_site.push_back(ok);
    }
    std::vector<FiberPermutation> out;
    std::vector<std::size_t> idx(per_site.size(), 0);
    while (true) {
        std::vector<std::pair<IndexPair, IndexPair>> mapping;
        for (std::uint32_t s = 0; s < per_site.size(); ++s) {
            const auto& p = per_site[s][idx[s]];
            for (std::uint32_t f = 0; f < p.size(); ++f) {
                mapping.push_back({{s, f}, {s, p[f]}});
            }
        }
        out.push_back(FiberPermutation::from_mapping(mapping));
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == per_site[k].size()) {
            idx[k++] = 0;
        }
        if (k == idx.size()) {
            break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool brute_supported(const Universe& u, Name x, const SupportSet& e)
{
    for (const auto& pi : all_fixing(u, e)) {
        if (act_name(pi, x) != x) {
            return false;
        }
    }
    return true;
}

bool brute_has_support(const Universe& u, Name x, std::size_t c)
{
    SymmetryGroup g(u, c);
    for (const auto& e : g.supports()) {
        if (brute_supported(u, x, e)) {
            return true;
        }
    }
    return false;
}

} // namespace

TEST(Permutation, ConstructionAndAlgebra)
{
    const auto t = FiberPermutation::transposition({0, 0}, {0, 1});
    EXPECT_EQ(t({0, 0}), (IndexPair{0, 1}));
    EXPECT_EQ(t({1, 0}), (IndexPair{1, 0}));
    EXPECT_TRUE((t * t).is_identity());
    EXPECT_THROW(FiberPermutation::transposition({0, 0}, {1, 0}), InvalidInstance);
    EXPECT_THROW(FiberPermutation::from_mapping({{{0, 0}, {0, 1}}, {{0, 2}, {0, 1}}}), InvalidInstance);
    const auto c = FiberPermutation::from_cycles({{{0, 0}, {0, 1}, {0, 2}}});
    EXPECT_EQ((c * c * c), FiberPermutation{});
    EXPECT_EQ(c.inverse() * c, FiberPermutation{});
    EXPECT_EQ(c.to_string(wide()), "(a,0 a,1 a,2)");
}

TEST(Permutation, ActionOnConditions)
{
    const auto& u = ref();
    const auto t = FiberPermutation::transposition({0, 0}, {0, 1});
    EXPECT_EQ(act_condition(t, Condition::make(u, {{{0, 0, 0}, true}})), Condition::make(u, {{{0, 1, 0}, true}}));
    const auto p = Condition::make(u, {{{0, 1, 1}, false}, {{1, 0, 0}, true}});
    EXPECT_EQ(act_condition(FiberPermutation{}, p), p);
    EXPECT_THROW(act_condition(FiberPermutation::transposition({0, 0}, {0, 2}), Condition::make(u, {{{0, 0, 1}, true}})),
                 MismatchedInstance);
}

TEST(Permutation, ActionIsAGroupHomomorphismAndOrderAutomorphism)
{
    const auto& u = wide();
    const auto perms = all_fixing(u, {});
    const auto conds = all_conditions(u, 2);
    for (std::size_t i = 0; i < perms.size(); i += 5) {
        for (std::size_t j = 0; j < perms.size(); j += 7) {
            for (std::size_t k = 0; k < conds.size(); k += 13) {
                const auto& p = conds[k];
                ASSERT_EQ(act_condition(perms[i] * perms[j], p), act_condition(perms[i], act_condition(perms[j], p)));
            }
            const auto x = pair_name(r_name(u, 0, 0), r_name(u, 1, 2));
            ASSERT_EQ(act_name(perms[i] * perms[j], x), act_name(perms[i], act_name(perms[j], x)));
        }
        for (std::size_t a = 0; a < conds.size(); a += 17) {
            for (std::size_t b = 0; b < conds.size(); b += 3) {
                ASSERT_EQ(extends(conds[a], conds[b]),
                          extends(act_condition(perms[i], conds[a]), act_condition(perms[i], conds[b])));
            }
        }
    }
}

TEST(Permutation, ActionOnCanonicalNames)
{
    const auto& u = ref();
    const auto t = FiberPermutation::transposition({0, 0}, {0, 1});
    EXPECT_EQ(act_name(t, r_name(u, 0, 0)), r_name(u, 0, 1));
    EXPECT_EQ(act_name(t, big_r_name(u, 0)), big_r_name(u, 0));
    EXPECT_EQ(act_name(t, check_name(HFSet::ordinal(3))), check_name(HFSet::ordinal(3)));
}

TEST(FixGenerators, Examples)
{
    const auto& one = Universe::intern({"a"}, {{2, 2}}, 4);
    SymmetryGroup g1(one, 1);
    EXPECT_EQ(g1.fix_generators({}), std::vector<FiberPermutation>{FiberPermutation::transposition({0, 0}, {0, 1})});
    EXPECT_TRUE(g1.fix_generators(SupportSet::make(one, {{0, 0}})).empty());
    SymmetryGroup g2(ref(), 1);
    EXPECT_EQ(g2.fix_generators(SupportSet::make(ref(), {{0, 0}})),
              std::vector<FiberPermutation>{FiberPermutation::transposition({1, 0}, {1, 1})});
}

TEST(FixGenerators, GenerateExactlyFixE)
{
    const auto& u = wide();
    SymmetryGroup g(u, 2);
    for (const auto& e : g.supports()) {
        ASSERT_EQ(generate_group(g.fix_generators(e)), all_fixing(u, e)) << e.to_string(u);
    }
}

TEST(Supports, Examples)
{
    const auto& u = ref();
    SymmetryGroup g(u, 1);
    EXPECT_TRUE(is_symmetric_under(g, r_name(u, 0, 0), SupportSet::make(u, {{0, 0}})));
    EXPECT_TRUE(is_symmetric_under(g, big_r_name(u, 0), {}));
    EXPECT_FALSE(is_symmetric_under(g, r_name(u, 0, 0), {}));
    const auto& w = wide();
    SymmetryGroup gw(w, 1);
    const auto pr = pair_name(r_name(w, 0, 1), r_name(w, 0, 2));
    EXPECT_FALSE(is_symmetric_under(gw, pr, SupportSet::make(w, {{0, 0}})));
    EXPECT_FALSE(infer_min_support(gw, pr).has_value());
    EXPECT_FALSE(is_hs(gw, pr));
}

TEST(Supports, MinimalSupportsOfCanonicalNames)
{
    for (const Universe* u : {&ref(), &wide()}) {
        SymmetryGroup g(*u, 1);
        for (const auto& p : u->pairs()) {
            const auto s = infer_min_support(g, r_name(*u, p.site, p.fiber));
            ASSERT_TRUE(s.has_value());
            EXPECT_EQ(*s, SupportSet::make(*u, {p}));
            EXPECT_TRUE(is_hs(g, r_name(*u, p.site, p.fiber)));
        }
        for (std::uint32_t z = 0; z < u->site_count(); ++z) {
            EXPECT_EQ(infer_min_support(g, big_r_name(*u, z)), SupportSet{});
            // R_z is symmetric, but its elements need a one-pair support
            EXPECT_FALSE(is_hs(SymmetryGroup(*u, 0), big_r_name(*u, z)));
        }
        EXPECT_EQ(infer_min_support(g, check_name(HFSet::ordinal(2))), SupportSet{});
    }
}

TEST(Supports, AgreeWithBruteForceGroupEnumeration)
{
    const auto& u = wide();
    SymmetryGroup g(u, 1);
    std::vector<Name> names{r_name(u, 0, 1),
                            big_r_name(u, 1),
                            pair_name(r_name(u, 0, 1), r_name(u, 0, 2)),
                            pair_name(r_name(u, 0, 0), r_name(u, 1, 0)),
                            bullet_name({r_name(u, 0, 0), r_name(u, 0, 1)}),
                            bullet_name({r_name(u, 1, 2)}),
                            graph_name(u, {0, 1}),
                            d_name(u, {1})};
    for (auto x : names) {
        for (const auto& e : g.supports()) {
            ASSERT_EQ(is_symmetric_under(g, x, e), brute_supported(u, x, e)) << x.to_string() << " " << e.to_string(u);
        }
        EXPECT_EQ(infer_min_support(g, x).has_value(), brute_has_support(u, x, 1)) << x.to_string();
    }
}

TEST(Supports, Monotone)
{
    const auto& u = wide();
    SymmetryGroup g(u, 2);
    const auto x = pair_name(r_name(u, 0, 1), r_name(u, 1, 2));
    const auto all = g.supports();
    for (const auto& e : all) {
        if (!is_symmetric_under(g, x, e)) {
            continue;
        }
        for (const auto& f : all) {
            if (e.subset_of(f)) {
                ASSERT_TRUE(is_symmetric_under(g, x, f));
            }
        }
    }
}

TEST(Conjugation, Examples)
{
    const auto& u = ref();
    SymmetryGroup g(u, 1);
    const auto t = FiberPermutation::transposition({0, 0}, {0, 1});
    auto v = conjugation_check(g, t, SupportSet::make(u, {{0, 0}}));
    EXPECT_TRUE(v.equal);
    EXPECT_EQ(v.image, SupportSet::make(u, {{0, 1}}));
    EXPECT_TRUE(conjugation_check(g, FiberPermutation{}, SupportSet::make(u, {{1, 1}})).equal);
}

TEST(Conjugation, AllPairsOnWideInstanceMatchBruteForce)
{
    const auto& u = wide();
    SymmetryGroup g(u, 1);
    const auto perms = all_fixing(u, {});
    for (std::size_t i = 0; i < perms.size(); i += 3) {
        const auto& pi = perms[i];
        for (const auto& e : g.supports()) {
            auto v = conjugation_check(g, pi, e);
            ASSERT_TRUE(v.equal);
            std::vector<FiberPermutation> conj;
            for (const auto& f : all_fixing(u, e)) {
                conj.push_back(pi * f * pi.inverse());
            }
            std::sort(conj.begin(), conj.end());
            ASSERT_EQ(conj, all_fixing(u, e.image(pi)));
        }
    }
}

TEST(DcAssemble, Examples)
{
    const auto& u = ref();
    SymmetryGroup g(u, 1);
    auto empty = dc_assemble(g, {});
    EXPECT_TRUE(empty.name.empty());
    EXPECT_TRUE(empty.hs);

    const auto& w = wide();
    SymmetryGroup g2(w, 2);
    auto two = dc_assemble(g2, {r_name(w, 0, 0), r_name(w, 0, 1)});
    EXPECT_TRUE(two.hs);
    EXPECT_EQ(two.route, "union");
    EXPECT_EQ(two.union_support, SupportSet::make(w, {{0, 0}, {0, 1}}));

    // The union exceeds c=1, yet {(a,2)} supports the assembled name: the only
    // fix({(a,2)}) move on site a swaps the two elements.
    SymmetryGroup g1(w, 1);
    auto a = dc_assemble(g1, {r_name(w, 0, 0), r_name(w, 0, 1)});
    EXPECT_EQ(a.route, "search");
    EXPECT_TRUE(a.hs);
    EXPECT_EQ(a.min_support, SupportSet::make(w, {{0, 2}}));
    EXPECT_TRUE(brute_supported(w, a.name, SupportSet::make(w, {{0, 2}})));
    EXPECT_EQ(a.hs, is_hs(g1, a.name));

    auto bad = dc_assemble(g1, {pair_name(r_name(w, 0, 1), r_name(w, 0, 2))});
    EXPECT_EQ(bad.route, "element-not-hs");
    EXPECT_FALSE(bad.hs);
}

TEST(Words, IdentityAndLength)
{
    const auto& u = ref();
    SymmetryGroup g(u, 1);
    const auto w0 = words_up_to(g.generators(), 0);
    ASSERT_EQ(w0.size(), 1u);
    EXPECT_TRUE(w0[0].is_identity());
    EXPECT_EQ(words_up_to(g.generators(), 3).size(), 4u);
    EXPECT_EQ(generate_group(SymmetryGroup(wide(), 1).generators()).size(), 36u);
}
