#ifndef SYMEXT_KERNELS_HPP
#define SYMEXT_KERNELS_HPP

// Executable proof kernels: the finite combinatorial steps behind the
// swap-permutation contradiction arguments, the stage-locality argument and
// the density argument for min r_{z,α}.
//
// Kernels check combinatorial steps only. Cardinal comparisons inside the
// symmetric model are never asserted, and the hypothetical function name
// of the proofs is not materialized: a kernel works on its footprint
// (the condition q, the support E and the swapped index pair).

#include <symext/core.hpp>
#include <symext/errors.hpp>
#include <symext/forcing.hpp>
#include <symext/hfset.hpp>
#include <symext/instances.hpp>
#include <symext/names.hpp>
#include <symext/permutation.hpp>
#include <symext/symmetry.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace symext {

struct KernelCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct KernelReport {
    std::string kernel;
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<std::pair<std::string, std::string>> witnesses;
    std::vector<KernelCheck> checks;
    bool pass = false;

    static constexpr const char* scope =
        "finite combinatorial step only; no cardinal comparison in the symmetric model is asserted";

    const KernelCheck* check(std::string_view n) const
    {
        for (const auto& c : checks) {
            if (c.name == n) {
                return &c;
            }
        }
        return nullptr;
    }

    void finish()
    {
        pass = std::all_of(checks.begin(), checks.end(), [](const KernelCheck& c) { return c.passed; });
    }
};

/// The least β ≠ α with (z, β) ∉ E and no cell of q on fiber (z, β).
inline std::uint32_t swap_partner(const Universe& u, const Condition& q, const SupportSet& e, std::uint32_t z,
                                  std::uint32_t alpha)
{
    common_universe(&u, q.universe());
    if (!u.contains(IndexPair{z, alpha})) {
        throw PreconditionViolated("(z,α) out of bounds");
    }
    if (e.contains({z, alpha})) {
        throw PreconditionViolated(u.pair_text({z, alpha}) + " lies in E");
    }
    for (std::uint32_t beta = 0; beta < u.shape(z).fibers; ++beta) {
        if (beta != alpha && !e.contains({z, beta}) && !q.touches({z, beta})) {
            return beta;
        }
    }
    throw FiberExhausted("no free partner for " + u.pair_text({z, alpha}));
}

namespace detail {

inline KernelCheck compatibility_check(const Condition& q, const Condition& pq, KernelReport& report)
{
    KernelCheck c{"compatible(q,pi q)", false, {}};
    auto m = compatible(q, pq);
    if (m.compatible) {
        const bool both = extends(*m.witness, q) && extends(*m.witness, pq);
        c.passed = both;
        c.detail = both ? "merge extends both" : "merge witness does not extend both";
        report.witnesses.push_back({"merge", m.witness->to_string()});
        report.witnesses.push_back({"merge_size", std::to_string(m.witness->size())});
        if (m.cutoff_exceeded) {
            report.witnesses.push_back({"merge_note", "CutoffExceeded"});
        }
    } else {
        c.detail = "q and pi q disagree on a common cell";
    }
    return c;
}

inline KernelCheck fix_check(const SymmetryGroup& group, const FiberPermutation& pi, const SupportSet& e)
{
    KernelCheck c{"pi in fix(E)", true, {}};
    if (!group.contains(pi)) {
        c.passed = false;
        c.detail = "pi is not in the group";
        return c;
    }
    for (const auto& m : pi.moved()) {
        if (e.contains(m)) {
            c.passed = false;
            c.detail = "pi moves " + group.universe().pair_text(m);
            return c;
        }
    }
    return c;
}

} // namespace detail

/// The swap step: with β = swap_partner(q, E, z, α) and π = ((z,α) (z,β)),
/// check π ∈ fix(E), π fixes every E-supported name supplied, and q is
/// compatible with πq.
inline KernelReport swap_kernel(const SymmetryGroup& group, const Condition& q, const SupportSet& e, std::uint32_t z,
                                std::uint32_t alpha, const std::vector<Name>& supported_names = {})
{
    const Universe& u = group.universe();
    KernelReport r;
    r.kernel = "swap";
    r.inputs = {{"q", q.to_string()}, {"E", e.to_string(u)}, {"z", u.label(z)}, {"alpha", std::to_string(alpha)}};
    for (auto x : supported_names) {
        if (!is_symmetric_under(group, x, e)) {
            throw PreconditionViolated("supplied name is not supported by E: " + x.to_string());
        }
    }
    const std::uint32_t beta = swap_partner(u, q, e, z, alpha);
    const auto pi = FiberPermutation::transposition({z, alpha}, {z, beta});
    r.witnesses.push_back({"beta", std::to_string(beta)});
    r.witnesses.push_back({"pi", pi.to_string(u)});

    r.checks.push_back(detail::fix_check(group, pi, e));

    KernelCheck fixed{"E-supported names fixed", true, std::to_string(supported_names.size()) + " names"};
    for (auto x : supported_names) {
        if (act_name(pi, x) != x) {
            fixed.passed = false;
            fixed.detail = "pi moves " + x.to_string();
            break;
        }
    }
    r.checks.push_back(std::move(fixed));

    r.checks.push_back(detail::compatibility_check(q, act_condition(pi, q), r));
    r.finish();
    return r;
}

/// The least δ at stage α with (α, δ) ∉ E.
inline std::uint32_t default_wisc_fiber(const Universe& u, const SupportSet& e, std::uint32_t alpha)
{
    for (std::uint32_t d = 0; d < u.shape(alpha).fibers; ++d) {
        if (!e.contains({alpha, d})) {
            return d;
        }
    }
    throw FiberExhausted("E covers stage " + u.label(alpha));
}

/// The stage-locality step: y is a P^{≤β}-name and α > β. With τ the least
/// fiber of stage α other than δ that avoids E and q, π = ((α,δ) (α,τ))
/// must fix y, lie in fix(E), and make q and πq compatible. The fixation of
/// y is checked by the action and cross-checked against the footprint.
inline KernelReport wisc_kernel(const StagedInstance& inst, std::uint32_t beta, Name y, std::uint32_t alpha,
                                std::uint32_t delta, const Condition& q, const SupportSet& e)
{
    const Universe& u = inst.universe();
    common_universe(&u, q.universe());
    common_universe(&u, y.universe());
    if (!in_stage_space(y, beta)) {
        throw StageViolation("y uses cells above stage " + u.label(beta));
    }
    if (alpha <= beta || alpha >= u.site_count()) {
        throw PreconditionViolated("need beta < alpha < stage count");
    }
    if (e.contains({alpha, delta})) {
        throw PreconditionViolated(u.pair_text({alpha, delta}) + " lies in E");
    }
    KernelReport r;
    r.kernel = "wisc";
    r.inputs = {{"beta", u.label(beta)}, {"y", y.to_string()},    {"alpha", u.label(alpha)},
                {"delta", std::to_string(delta)}, {"q", q.to_string()}, {"E", e.to_string(u)}};
    const std::uint32_t tau = swap_partner(u, q, e, alpha, delta);
    const auto pi = FiberPermutation::transposition({alpha, delta}, {alpha, tau});
    r.witnesses.push_back({"tau", std::to_string(tau)});
    r.witnesses.push_back({"pi", pi.to_string(u)});

    KernelCheck fixes{"pi fixes y", act_name(pi, y) == y, {}};
    const auto fp = y.footprint();
    const auto moved = pi.moved();
    const bool disjoint = std::none_of(moved.begin(), moved.end(), [&](const IndexPair& m) {
        return std::binary_search(fp.begin(), fp.end(), m);
    });
    if (disjoint != fixes.passed) {
        fixes.passed = false;
        fixes.detail = "action and footprint formulations disagree";
    } else {
        fixes.detail = "moved set disjoint from footprint";
    }
    r.checks.push_back(std::move(fixes));
    r.checks.push_back(detail::fix_check(inst.group(), pi, e));
    r.checks.push_back(detail::compatibility_check(q, act_condition(pi, q), r));
    r.finish();
    return r;
}

inline KernelReport wisc_kernel(const StagedInstance& inst, std::uint32_t beta, Name y, std::uint32_t alpha,
                                const Condition& q, const SupportSet& e)
{
    return wisc_kernel(inst, beta, y, alpha, default_wisc_fiber(inst.universe(), e, alpha), q, e);
}

struct MinOntoReport {
    std::uint32_t site = 0;
    std::size_t checked = 0;
    std::size_t witnessed = 0;
    /// (p, γ) with no fresh fiber left at the site.
    std::vector<std::pair<Condition, std::uint32_t>> failures;
    /// (p, γ) whose constructed witness did not force min = γ; never expected.
    std::vector<std::pair<Condition, std::uint32_t>> defects;

    bool clean() const noexcept { return defects.empty(); }
};

/// The witness for (p, γ): on the least fiber α of `site` untouched by p,
/// set slots 0..γ-1 to 0 and slot γ to 1. Returns nullopt when p touches
/// every fiber of the site.
inline std::optional<std::pair<Condition, std::uint32_t>> min_onto_witness(const Universe& u, const Condition& p,
                                                                           std::uint32_t site, std::uint32_t gamma)
{
    for (std::uint32_t a = 0; a < u.shape(site).fibers; ++a) {
        if (p.touches({site, a})) {
            continue;
        }
        std::vector<Assignment> entries(p.entries().begin(), p.entries().end());
        for (std::uint32_t d = 0; d < gamma; ++d) {
            entries.push_back({{site, a, d}, false});
        }
        entries.push_back({{site, a, gamma}, true});
        return std::make_pair(Condition::make_unbounded(u, std::move(entries)), a);
    }
    return std::nullopt;
}

/// Density of the map r_{z,α} ↦ min r_{z,α}: for every p with
/// |dom p| ≤ d - v and every γ < v, an extension q of p and a fiber α with
/// q ⊩ min(r_{z,α}) = γ̌. An empty r interprets its min-name to the
/// sentinel v.
inline MinOntoReport min_onto_check(const Instance& inst, std::uint32_t site, SemanticOracle* oracle = nullptr)
{
    const Universe& u = inst.universe();
    if (site >= u.site_count()) {
        throw PreconditionViolated("site out of range");
    }
    std::optional<SemanticOracle> own;
    if (oracle == nullptr) {
        own.emplace(u);
        oracle = &*own;
    }
    const std::uint32_t v = inst.value_bound();
    const std::size_t budget = u.domain_cutoff() >= v ? u.domain_cutoff() - v : 0;
    MinOntoReport out;
    out.site = site;
    std::vector<Name> targets;
    for (std::uint32_t g = 0; g < v; ++g) {
        targets.push_back(check_name(HFSet::ordinal(g)));
    }
    for_each_condition(u, budget, [&](const Condition& p) {
        for (std::uint32_t g = 0; g < v; ++g) {
            ++out.checked;
            auto w = min_onto_witness(u, p, site, g);
            if (!w) {
                out.failures.push_back({p, g});
                continue;
            }
            const Formula f = Formula::eq(min_name(u, site, w->second), targets[g]);
            if (extends(w->first, p) && oracle->forces(w->first, f)) {
                ++out.witnessed;
            } else {
                out.defects.push_back({p, g});
            }
        }
    });
    return out;
}

} // namespace symext

#endif // SYMEXT_KERNELS_HPP
