// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <symext/checks.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace symext;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

const BuiltInstance& reference()
{
    static const BuiltInstance b = build_instance(Poset::make({"a", "b"}, {}), 2, 2, 1, 8);
    return b;
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome forcing_oracle()
{
    const auto start = Clock::now();
    const auto& b = reference();
    const auto& u = b.instance.universe();
    ForcingEngine engine(u);
    const auto pool = standard_formula_pool(b);
    const auto conds = all_conditions(u, 2);
    std::size_t mismatches = 0;
    std::size_t forced = 0;
    for (const auto& lf : pool) {
        for (const auto& p : conds) {
            const bool s = engine.forces(p, lf.formula, ForcingMode::semantic);
            const bool r = engine.forces(p, lf.formula, ForcingMode::recursive);
            mismatches += s != r ? 1 : 0;
            forced += s ? 1 : 0;
        }
    }
    const double t = seconds_since(start);
    return {pool.size() >= 20 && mismatches == 0 && t < 60.0,
            fmt("%zu formulas x %zu conditions, %zu forced, %zu mismatches, %.2f s (limit 60 s)", pool.size(),
                conds.size(), forced, mismatches, t)};
}

Outcome symmetry_lemma()
{
    const auto& b = reference();
    const auto& u = b.instance.universe();
    ForcingEngine engine(u);
    const auto pool = standard_formula_pool(b);
    const auto conds = all_conditions(u, 2);
    const auto perms = words_up_to(b.instance.group().generators(), 3);
    std::size_t checks = 0;
    std::size_t failures = 0;
    for (const auto& pi : perms) {
        for (const auto& lf : pool) {
            const Formula moved = act_formula(pi, lf.formula);
            for (const auto& p : conds) {
                const auto pp = act_condition(pi, p);
                for (auto mode : {ForcingMode::semantic, ForcingMode::recursive}) {
                    ++checks;
                    failures += engine.forces(p, lf.formula, mode) != engine.forces(pp, moved, mode) ? 1 : 0;
                }
            }
        }
    }
    return {failures == 0, fmt("%zu permutations, %zu checks over both modes, %zu failures", perms.size(), checks,
                               failures)};
}

Outcome name_algebra()
{
    std::size_t checks = 0;
    std::size_t failures = 0;
    for (std::uint32_t n : {2u, 3u}) {
        const auto b = build_instance(Poset::make({"a", "b"}, {}), n, 2, 1, std::nullopt);
        const auto& u = b.instance.universe();
        for (const auto& g : b.instance.group().generators()) {
            for (const auto& [p, x] : b.family.r) {
                ++checks;
                failures += act_name(g, x) != r_name(u, g(p).site, g(p).fiber) ? 1 : 0;
            }
            for (std::uint32_t z = 0; z < u.site_count(); ++z) {
                ++checks;
                failures += act_name(g, big_r_name(u, z)) != big_r_name(u, z) ? 1 : 0;
            }
            for (auto s : hf_sets_rank_le2()) {
                ++checks;
                failures += act_name(g, check_name(s)) != check_name(s) ? 1 : 0;
            }
        }
    }
    return {failures == 0, fmt("%zu identities over all generators (n=2 and n=3), %zu failures", checks, failures)};
}

Outcome swap_kernel_sweep()
{
    const auto start = Clock::now();
    const auto b = build_instance(Poset::make({"a", "b"}, {}), 3, 2, 1, std::nullopt);
    const auto& u = b.instance.universe();
    const auto group = b.instance.group();
    const auto conds = all_conditions(u, 4);
    std::vector<Name> family;
    for (const auto& [p, x] : b.family.r) {
        family.push_back(x);
    }
    family.insert(family.end(), b.family.big_r.begin(), b.family.big_r.end());
    for (const auto& [q, x] : b.family.d) {
        family.push_back(x);
    }
    family.push_back(b.family.graph);
    std::size_t admissible = 0;
    std::size_t passed = 0;
    std::size_t exhausted = 0;
    for (const auto& e : group.supports_up_to(1)) {
        std::vector<Name> supported;
        for (auto x : family) {
            if (is_symmetric_under(group, x, e)) {
                supported.push_back(x);
            }
        }
        for (const auto& zp : u.pairs()) {
            if (e.contains(zp)) {
                continue;
            }
            for (const auto& q : conds) {
                try {
                    const auto r = swap_kernel(group, q, e, zp.site, zp.fiber, supported);
                    ++admissible;
                    passed += r.pass ? 1 : 0;
                } catch (const FiberExhausted&) {
                    ++exhausted;
                }
            }
        }
    }
    const double t = seconds_since(start);
    return {admissible > 0 && passed == admissible && t < 300.0,
            fmt("%zu conditions, %zu admissible tuples, %zu passed, %zu without a free partner, %.2f s (limit 300 s)",
                conds.size(), admissible, passed, exhausted, t)};
}

Outcome support_facts()
{
    const auto& b = reference();
    const auto& u = b.instance.universe();
    const auto group = b.instance.group();
    std::size_t ok = 0;
    std::size_t total = 0;
    for (const auto& [p, x] : b.family.r) {
        ++total;
        ok += infer_min_support(group, x) == SupportSet::make(u, {p}) ? 1 : 0;
    }
    for (auto x : b.family.big_r) {
        ++total;
        ok += infer_min_support(group, x) == SupportSet{} ? 1 : 0;
    }
    const auto w = build_instance(Poset::make({"a", "b"}, {}), 3, 2, 1, std::nullopt);
    const auto& wu = w.instance.universe();
    const bool none = !infer_min_support(w.instance.group(), pair_name(r_name(wu, 0, 1), r_name(wu, 0, 2)));
    return {ok == total && none,
            fmt("%zu/%zu canonical supports as expected; n=3 pair-name counterexample %s", ok, total,
                none ? "returns NONE" : "has a support")};
}

Outcome filter_laws()
{
    const auto& b = reference();
    const auto group = b.instance.group();
    const auto perms = words_up_to(group.generators(), 3);
    std::size_t conj = 0;
    std::size_t conj_ok = 0;
    for (const auto& pi : perms) {
        for (const auto& e : group.supports()) {
            ++conj;
            conj_ok += conjugation_check(group, pi, e).equal ? 1 : 0;
        }
    }
    std::vector<Name> pool;
    for (const auto& [p, x] : b.family.r) {
        pool.push_back(x);
    }
    pool.insert(pool.end(), b.family.big_r.begin(), b.family.big_r.end());
    std::size_t collections = 0;
    std::size_t agree = 0;
    auto check = [&](const std::vector<Name>& ts) {
        ++collections;
        const auto a = dc_assemble(group, ts);
        agree += a.hs == is_hs(group, a.name) ? 1 : 0;
    };
    check({});
    for (std::size_t i = 0; i < pool.size(); ++i) {
        check({pool[i]});
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            check({pool[i], pool[j]});
            for (std::size_t k = j + 1; k < pool.size(); ++k) {
                check({pool[i], pool[j], pool[k]});
            }
        }
    }
    return {conj_ok == conj && agree == collections,
            fmt("conjugation %zu/%zu; dc_assemble agrees with is_hs on %zu/%zu collections", conj_ok, conj, agree,
                collections)};
}

Outcome embedding_law()
{
    std::mt19937_64 rng(20261015);
    std::uniform_int_distribution<std::size_t> size(1, 8);
    std::size_t pairs = 0;
    std::size_t agree = 0;
    for (int i = 0; i < 100; ++i) {
        const auto p = Poset::random(size(rng), rng);
        const auto d = downset_embedding(p);
        for (std::size_t a = 0; a < p.size(); ++a) {
            for (std::size_t c = 0; c < p.size(); ++c) {
                ++pairs;
                agree += p.leq(a, c) == site_subset(d[a], d[c]) ? 1 : 0;
            }
        }
    }
    return {agree == pairs, fmt("100 posets (seed 20261015), %zu/%zu pairs agree", agree, pairs)};
}

Outcome chains()
{
    const auto& b = reference();
    const auto& u = b.instance.universe();
    std::size_t mono = 0;
    std::size_t mono_ok = 0;
    for (const auto& [q, dq] : b.family.d) {
        for (const auto& [t, dt] : b.family.d) {
            if (!site_subset(q, t)) {
                continue;
            }
            for (auto g : enumerate_generics(u)) {
                ++mono;
                mono_ok += interpret(dq, g).subset_of(interpret(dt, g)) ? 1 : 0;
            }
        }
    }
    const auto s = build_staged_instance({3, 4, 5}, 1, 1u);
    const auto chain = chain_family(s.instance);
    bool strict = chain.size() == 3;
    for (std::size_t i = 0; strict && i + 1 < chain.size(); ++i) {
        const auto big = chain[i].entries();
        const auto small = chain[i + 1].entries();
        strict = std::includes(big.begin(), big.end(), small.begin(), small.end()) && small.size() < big.size();
    }
    std::size_t incl = 0;
    std::size_t incl_ok = 0;
    for (auto g : enumerate_generics(s.instance.universe())) {
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
            ++incl;
            incl_ok += interpret(chain[i + 1], g).subset_of(interpret(chain[i], g)) ? 1 : 0;
        }
    }
    return {mono_ok == mono && strict && incl_ok == incl,
            fmt("D-monotonicity %zu/%zu (Q,T,G); k=3 chain strictly decreasing by entries: %s; interpreted %zu/%zu",
                mono_ok, mono, strict ? "yes" : "no", incl_ok, incl)};
}

Outcome stage_locality()
{
    const auto s = build_staged_instance({3, 4}, 1, 1u);
    const auto& u = s.instance.universe();
    std::vector<FiberPermutation> stage2;
    for (std::uint32_t x = 0; x < u.shape(1).fibers; ++x) {
        for (std::uint32_t y = x + 1; y < u.shape(1).fibers; ++y) {
            stage2.push_back(FiberPermutation::transposition({1, x}, {1, y}));
        }
    }
    // every stage-1 condition is fixed; by induction on rank this covers
    // every stage-1 name
    std::size_t conds = 0;
    std::size_t conds_fixed = 0;
    for_each_condition(u, u.domain_cutoff(), [&](const Condition& p) {
        if (p.empty() || std::any_of(p.entries().begin(), p.entries().end(),
                                     [](const Assignment& a) { return a.cell.site != 0; })) {
            return;
        }
        for (const auto& pi : stage2) {
            ++conds;
            conds_fixed += act_condition(pi, p) == p ? 1 : 0;
        }
    });
    const auto pool = stage_name_pool(s, 0, u.easton_bound(0));
    std::size_t names = 0;
    std::size_t fixed = 0;
    for (auto y : pool) {
        for (const auto& pi : stage2) {
            ++names;
            fixed += act_name(pi, y) == y ? 1 : 0;
        }
    }
    // the kernel over all q, all |E| ≤ 1, all δ, canonical stage-1 names
    std::vector<Name> ys{Name{}, check_name(HFSet::ordinal(2)), s.family.big_r[0], s.family.graph_prefix[0]};
    for (std::uint32_t a = 0; a < u.shape(0).fibers; ++a) {
        ys.push_back(s.family.r.at({0, a}));
    }
    const auto qs = all_conditions(u, u.domain_cutoff());
    std::size_t runs = 0;
    std::size_t admissible = 0;
    std::size_t passed = 0;
    for (const auto& e : s.instance.group().supports_up_to(1)) {
        for (std::uint32_t delta = 0; delta < u.shape(1).fibers; ++delta) {
            if (e.contains({1, delta})) {
                continue;
            }
            for (auto y : ys) {
                for (const auto& q : qs) {
                    ++runs;
                    try {
                        const auto r = wisc_kernel(s.instance, 0, y, 1, delta, q, e);
                        ++admissible;
                        passed += r.pass ? 1 : 0;
                    } catch (const FiberExhausted&) {
                    }
                }
            }
        }
    }
    return {conds_fixed == conds && fixed == names && passed == admissible && admissible > 0,
            fmt("stage-1 conditions fixed %zu/%zu; pool of %zu rank<=2 names fixed %zu/%zu; wisc_kernel %zu/%zu "
                "admissible of %zu runs",
                conds_fixed, conds, pool.size(), fixed, names, passed, admissible, runs)};
}

Outcome min_onto()
{
    const auto& b = reference();
    const auto& u = b.instance.universe();
    std::size_t checked = 0;
    bool ok = true;
    std::size_t failures = 0;
    for (std::uint32_t z = 0; z < u.site_count(); ++z) {
        const auto rep = min_onto_check(b.instance, z);
        checked += rep.checked;
        failures += rep.failures.size();
        std::set<std::pair<Condition, std::uint32_t>> got(rep.failures.begin(), rep.failures.end());
        std::set<std::pair<Condition, std::uint32_t>> boundary;
        for (const auto& p : all_conditions(u, u.domain_cutoff() - b.instance.value_bound())) {
            std::set<std::uint32_t> fibers;
            for (const auto& a : p.entries()) {
                if (a.cell.site == z) {
                    fibers.insert(a.cell.fiber);
                }
            }
            if (fibers.size() == u.shape(z).fibers) {
                for (std::uint32_t g = 0; g < b.instance.value_bound(); ++g) {
                    boundary.insert({p, g});
                }
            }
        }
        ok = ok && rep.clean() && got == boundary && rep.witnessed + rep.failures.size() == rep.checked;
    }
    return {ok, fmt("%zu (p,gamma) pairs; every pair with a spare fiber witnessed; %zu failures, all at saturation",
                    checked, failures)};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"forcing oracle equivalence", forcing_oracle},
        {"symmetry lemma", symmetry_lemma},
        {"canonical-name algebra", name_algebra},
        {"swap kernel", swap_kernel_sweep},
        {"support facts", support_facts},
        {"filter laws", filter_laws},
        {"embedding law", embedding_law},
        {"D-monotonicity and chain family", chains},
        {"stage locality", stage_locality},
        {"min_onto density", min_onto},
    };
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        all = all && o.pass;
        std::printf("criterion %2zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
