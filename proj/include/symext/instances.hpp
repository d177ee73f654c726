#ifndef SYMEXT_INSTANCES_HPP
#define SYMEXT_INSTANCES_HPP

// Builders for the concrete constructions: the fibered instance over a
// poset Z, the staged Easton-style instance, the decreasing chain family
// and the down-set embedding of Z into its power set.

#include <symext/core.hpp>
#include <symext/errors.hpp>
#include <symext/hfset.hpp>
#include <symext/names.hpp>
#include <symext/permutation.hpp>
#include <symext/symmetry.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace symext {

/// A finite partial order given by labelled elements; the relation is the
/// reflexive-transitive closure of the supplied pairs.
class Poset {
public:
    static Poset make(std::vector<std::string> elements, const std::vector<std::pair<std::string, std::string>>& leq)
    {
        Poset p;
        p.labels_ = std::move(elements);
        const std::size_t n = p.labels_.size();
        if (n == 0) {
            throw InvalidInstance("poset has no elements");
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (p.labels_[i] == p.labels_[j]) {
                    throw InvalidInstance("duplicate poset element '" + p.labels_[i] + "'");
                }
            }
        }
        p.leq_.assign(n * n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            p.leq_[i * n + i] = 1;
        }
        for (const auto& [a, b] : leq) {
            auto ia = p.index_of(a);
            auto ib = p.index_of(b);
            if (!ia || !ib) {
                throw InvalidInstance("order pair mentions unknown element '" + (ia ? b : a) + "'");
            }
            p.leq_[*ia * n + *ib] = 1;
        }
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (p.leq_[i * n + k] && p.leq_[k * n + j]) {
                        p.leq_[i * n + j] = 1;
                    }
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (p.leq_[i * n + j] && p.leq_[j * n + i]) {
                    throw InvalidInstance("order is not antisymmetric: " + p.labels_[i] + " and " + p.labels_[j]);
                }
            }
        }
        return p;
    }

    static Poset antichain(std::size_t n, const std::string& prefix = "z")
    {
        return make(numbered(n, prefix), {});
    }

    static Poset chain(std::size_t n, const std::string& prefix = "z")
    {
        auto labels = numbered(n, prefix);
        std::vector<std::pair<std::string, std::string>> leq;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            leq.push_back({labels[i], labels[i + 1]});
        }
        return make(labels, leq);
    }

    /// A random order: each pair i < j of a random linear extension is
    /// related with probability `density` before transitive closure.
    template <typename Rng>
    static Poset random(std::size_t n, Rng& rng, double density = 0.3)
    {
        auto labels = numbered(n, "p");
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) {
            perm[i] = i;
        }
        std::shuffle(perm.begin(), perm.end(), rng);
        std::bernoulli_distribution coin(density);
        std::vector<std::pair<std::string, std::string>> leq;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (coin(rng)) {
                    leq.push_back({labels[perm[i]], labels[perm[j]]});
                }
            }
        }
        return make(labels, leq);
    }

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }

    std::optional<std::uint32_t> index_of(std::string_view label) const
    {
        for (std::uint32_t i = 0; i < labels_.size(); ++i) {
            if (labels_[i] == label) {
                return i;
            }
        }
        return std::nullopt;
    }

    bool leq(std::size_t a, std::size_t b) const { return leq_.at(a * size() + b) != 0; }

    /// The covering-free list of all related pairs (a, b) with a ≤ b, a ≠ b.
    std::vector<std::pair<std::string, std::string>> relation() const
    {
        std::vector<std::pair<std::string, std::string>> out;
        for (std::size_t i = 0; i < size(); ++i) {
            for (std::size_t j = 0; j < size(); ++j) {
                if (i != j && leq(i, j)) {
                    out.push_back({labels_[i], labels_[j]});
                }
            }
        }
        return out;
    }

private:
    static std::vector<std::string> numbered(std::size_t n, const std::string& prefix)
    {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < n; ++i) {
            out.push_back(prefix + std::to_string(i));
        }
        return out;
    }

    std::vector<std::string> labels_;
    std::vector<std::uint8_t> leq_;
};

using SiteSet = std::vector<std::uint32_t>; // sorted element indices

/// z ↦ { z' : z' ≤ z }.
inline std::vector<SiteSet> downset_embedding(const Poset& z)
{
    std::vector<SiteSet> out(z.size());
    for (std::uint32_t a = 0; a < z.size(); ++a) {
        for (std::uint32_t b = 0; b < z.size(); ++b) {
            if (z.leq(b, a)) {
                out[a].push_back(b);
            }
        }
    }
    return out;
}

inline bool site_subset(const SiteSet& a, const SiteSet& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// All subsets of {0, ..., n-1}, by size, then lexicographically.
inline std::vector<SiteSet> all_site_subsets(std::size_t n)
{
    if (n > 16) {
        throw TooLarge("power set of " + std::to_string(n) + " sites");
    }
    std::vector<SiteSet> out;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        SiteSet s;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                s.push_back(i);
            }
        }
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const SiteSet& a, const SiteSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Canonical names shared by both modes

/// r_{site,α} = {({((site,α),γ) ↦ 1}, γ̌) : γ < slots}. Only the minimal
/// conditions are listed; every other condition with that cell set to 1
/// extends one of them, so the interpretation is unchanged.
inline Name r_name(const Universe& u, std::uint32_t site, std::uint32_t fiber)
{
    if (!u.contains(IndexPair{site, fiber})) {
        throw InvalidInstance("r-name index out of bounds");
    }
    std::vector<NameEntry> entries;
    for (std::uint32_t g = 0; g < u.shape(site).slots; ++g) {
        entries.push_back({Condition::make_unbounded(u, {{{site, fiber, g}, true}}), check_name(HFSet::ordinal(g))});
    }
    return Name::make(std::move(entries));
}

/// R_site = {r_{site,α} : α < fibers}•.
inline Name big_r_name(const Universe& u, std::uint32_t site)
{
    std::vector<Name> rs;
    for (std::uint32_t a = 0; a < u.shape(site).fibers; ++a) {
        rs.push_back(r_name(u, site, a));
    }
    return bullet_name(rs);
}

/// D_Q = ⋃_{z ∈ Q} R_z as a bullet name over the r-names.
inline Name d_name(const Universe& u, const SiteSet& q)
{
    std::vector<Name> rs;
    for (auto z : q) {
        for (std::uint32_t a = 0; a < u.shape(z).fibers; ++a) {
            rs.push_back(r_name(u, z, a));
        }
    }
    return bullet_name(rs);
}

/// The graph name {(ž, R_z)• : z}• where ž is the von Neumann ordinal of z's index.
inline Name graph_name(const Universe& u, const std::vector<std::uint32_t>& sites)
{
    std::vector<Name> pairs;
    for (auto z : sites) {
        pairs.push_back(pair_name(check_name(HFSet::ordinal(z)), big_r_name(u, z)));
    }
    return bullet_name(pairs);
}

/// The name of min r_{site,α}: {(p_δ, δ̌) : δ < slots} with p_δ setting
/// slots 0..δ to 0. It interprets to min r, or to `slots` when r is empty.
inline Name min_name(const Universe& u, std::uint32_t site, std::uint32_t fiber)
{
    std::vector<NameEntry> entries;
    std::vector<Assignment> zeros;
    for (std::uint32_t d = 0; d < u.shape(site).slots; ++d) {
        zeros.push_back({{site, fiber, d}, false});
        entries.push_back({Condition::make_unbounded(u, zeros), check_name(HFSet::ordinal(d))});
    }
    return Name::make(std::move(entries));
}

struct NameFamily {
    std::map<IndexPair, Name> r;
    std::vector<Name> big_r;
    std::map<SiteSet, Name> d;
    Name graph;
};

// ---------------------------------------------------------------------------
// Plain mode

class Instance {
public:
    const Poset& poset() const noexcept { return poset_; }
    const Universe& universe() const noexcept { return *universe_; }
    std::uint32_t fiber_size() const noexcept { return n_; }
    std::uint32_t value_bound() const noexcept { return v_; }
    std::size_t support_cutoff() const noexcept { return c_; }
    std::size_t domain_cutoff() const noexcept { return universe_->domain_cutoff(); }
    SymmetryGroup group() const { return SymmetryGroup(*universe_, c_); }

    Condition condition(std::vector<Assignment> entries) const { return Condition::make(*universe_, std::move(entries)); }

private:
    friend struct InstanceBuilder;
    Poset poset_;
    const Universe* universe_ = nullptr;
    std::uint32_t n_ = 0;
    std::uint32_t v_ = 0;
    std::size_t c_ = 0;
};

struct BuiltInstance {
    Instance instance;
    NameFamily family;
};

struct InstanceBuilder {
    static Instance make(Poset z, std::uint32_t n, std::uint32_t v, std::size_t c, std::optional<std::size_t> d)
    {
        if (n == 0 || v == 0) {
            throw InvalidInstance("fiber size and value bound must be positive");
        }
        const std::size_t cells = z.size() * std::size_t{n} * v;
        const std::size_t dom = d.value_or(cells);
        if (dom == 0 || dom > cells) {
            throw InvalidInstance("domain cutoff must lie in [1, " + std::to_string(cells) + "]");
        }
        if (c > z.size() * std::size_t{n}) {
            throw InvalidInstance("support cutoff exceeds the number of index pairs");
        }
        // fix(E) must stay nontrivial for every admissible E: some site keeps
        // two free fibers unless E spends n-1 cells on every site.
        if (c >= z.size() * (std::size_t{n} - 1)) {
            throw InvalidInstance("trivial-group exclusion: a support of size " + std::to_string(c) +
                                  " can leave fix(E) trivial (need c < |Z|*(n-1))");
        }
        Instance inst;
        inst.universe_ = &Universe::intern(z.labels(), std::vector<SiteShape>(z.size(), SiteShape{n, v}), dom);
        inst.poset_ = std::move(z);
        inst.n_ = n;
        inst.v_ = v;
        inst.c_ = c;
        return inst;
    }
};

inline NameFamily canonical_family(const Instance& inst, bool with_subsets = true)
{
    const Universe& u = inst.universe();
    NameFamily f;
    std::vector<std::uint32_t> sites;
    for (std::uint32_t z = 0; z < u.site_count(); ++z) {
        sites.push_back(z);
        for (std::uint32_t a = 0; a < inst.fiber_size(); ++a) {
            f.r.emplace(IndexPair{z, a}, r_name(u, z, a));
        }
        f.big_r.push_back(big_r_name(u, z));
    }
    if (with_subsets) {
        for (const auto& q : all_site_subsets(u.site_count())) {
            f.d.emplace(q, d_name(u, q));
        }
    }
    f.graph = graph_name(u, sites);
    return f;
}

/// Builds the instance and its canonical name family, verifying that every
/// family member is hereditarily symmetric.
inline BuiltInstance build_instance(Poset z, std::uint32_t n, std::uint32_t v, std::size_t c,
                                    std::optional<std::size_t> d = std::nullopt)
{
    BuiltInstance out{InstanceBuilder::make(std::move(z), n, v, c, d), {}};
    out.family = canonical_family(out.instance, out.instance.poset().size() <= 10);
    const auto group = out.instance.group();
    auto require_hs = [&](Name x, const std::string& what) {
        if (!is_hs(group, x)) {
            throw InvalidInstance(what + " is not hereditarily symmetric within c=" +
                                  std::to_string(out.instance.support_cutoff()));
        }
    };
    for (const auto& [p, x] : out.family.r) {
        require_hs(x, "r" + out.instance.universe().pair_text(p));
    }
    for (std::size_t i = 0; i < out.family.big_r.size(); ++i) {
        require_hs(out.family.big_r[i], "R_" + out.instance.poset().label(i));
    }
    for (const auto& [q, x] : out.family.d) {
        require_hs(x, "D_Q");
    }
    require_hs(out.family.graph, "F");
    return out;
}

// ---------------------------------------------------------------------------
// Staged mode

/// A finite stage list n_1 < ... < n_k standing in for the Easton product.
/// Stage i has n_i fibers and min(n_i, slot cap) slots. A condition may hold
/// at most easton_i cells in stages ≤ i (default n_i - 1).
class StagedInstance {
public:
    const Universe& universe() const noexcept { return *universe_; }
    const std::vector<std::uint32_t>& stages() const noexcept { return stages_; }
    std::size_t stage_count() const noexcept { return stages_.size(); }
    std::size_t support_cutoff() const noexcept { return c_; }

    /// 𝒢 with its filter; permutations may move every stage.
    SymmetryGroup group() const { return SymmetryGroup(*universe_, c_); }

    /// 𝒢_i: permutations moving only stages ≤ i.
    SymmetryGroup group_at(std::uint32_t stage) const { return SymmetryGroup(*universe_, c_, stage); }

    Condition condition(std::vector<Assignment> entries) const { return Condition::make(*universe_, std::move(entries)); }

private:
    friend struct StagedBuilder;
    std::vector<std::uint32_t> stages_;
    const Universe* universe_ = nullptr;
    std::size_t c_ = 0;
};

struct StagedFamily {
    std::map<IndexPair, Name> r;
    std::vector<Name> big_r;
    /// {(ǐ, R_i)• : i ≤ j}• for every stage j.
    std::vector<Name> graph_prefix;
};

struct BuiltStagedInstance {
    StagedInstance instance;
    StagedFamily family;
};

struct StagedBuilder {
    static StagedInstance make(std::vector<std::uint32_t> stages, std::size_t c, std::optional<std::uint32_t> slot_cap,
                               std::vector<std::size_t> easton)
    {
        if (stages.empty()) {
            throw InvalidInstance("no stages");
        }
        for (std::size_t i = 0; i < stages.size(); ++i) {
            if (i > 0 && stages[i] <= stages[i - 1]) {
                throw InvalidInstance("stage sizes must be strictly increasing");
            }
            if (stages[i] < 3 || stages[i] < c + 2) {
                throw InvalidInstance("stage " + std::to_string(stages[i]) +
                                      " lacks headroom: need size >= max(3, c+2)");
            }
        }
        if (slot_cap && *slot_cap == 0) {
            throw InvalidInstance("slot cap must be positive");
        }
        if (easton.empty()) {
            for (auto s : stages) {
                easton.push_back(s - 1);
            }
        }
        if (easton.size() != stages.size()) {
            throw InvalidInstance("one Easton bound per stage is required");
        }
        std::vector<std::string> labels;
        std::vector<SiteShape> shapes;
        std::size_t cells = 0;
        for (auto s : stages) {
            labels.push_back(std::to_string(s));
            const auto slots = slot_cap ? std::min(*slot_cap, s) : s;
            shapes.push_back({s, slots});
            cells += std::size_t{s} * slots;
        }
        StagedInstance inst;
        inst.universe_ = &Universe::intern(std::move(labels), std::move(shapes), cells, std::move(easton));
        inst.stages_ = std::move(stages);
        inst.c_ = c;
        return inst;
    }
};

/// The highest stage any condition of x touches, or nullopt for a name whose
/// conditions are all 1_P.
inline std::optional<std::uint32_t> top_stage(Name x)
{
    auto fp = x.footprint();
    if (fp.empty()) {
        return std::nullopt;
    }
    return fp.back().site;
}

/// x is a P^{≤i}-name: every condition occurring in it lives in stages ≤ i.
inline bool in_stage_space(Name x, std::uint32_t stage)
{
    auto top = top_stage(x);
    return !top || *top <= stage;
}

/// x ∈ HS_i: a P^{≤i}-name, hereditarily symmetric for the filter of 𝒢_i.
inline bool is_hs_at(const StagedInstance& inst, Name x, std::uint32_t stage)
{
    return in_stage_space(x, stage) && is_hs(inst.group_at(stage), x);
}

inline BuiltStagedInstance build_staged_instance(std::vector<std::uint32_t> stages, std::size_t c,
                                                 std::optional<std::uint32_t> slot_cap = std::nullopt,
                                                 std::vector<std::size_t> easton = {})
{
    BuiltStagedInstance out{StagedBuilder::make(std::move(stages), c, slot_cap, std::move(easton)), {}};
    const Universe& u = out.instance.universe();
    std::vector<Name> prefix_pairs;
    for (std::uint32_t i = 0; i < u.site_count(); ++i) {
        for (std::uint32_t a = 0; a < u.shape(i).fibers; ++a) {
            out.family.r.emplace(IndexPair{i, a}, r_name(u, i, a));
        }
        out.family.big_r.push_back(big_r_name(u, i));
        prefix_pairs.push_back(pair_name(check_name(HFSet::ordinal(i)), out.family.big_r.back()));
        out.family.graph_prefix.push_back(bullet_name(prefix_pairs));
    }
    for (std::uint32_t i = 0; i < u.site_count(); ++i) {
        if (!is_hs_at(out.instance, out.family.big_r[i], i)) {
            throw InvalidInstance("R_" + u.label(i) + " is not in HS_" + u.label(i));
        }
        if (!is_hs_at(out.instance, out.family.graph_prefix[i], i)) {
            throw InvalidInstance("graph prefix at stage " + u.label(i) + " is not symmetric");
        }
    }
    return out;
}

/// D_{β*} = ⋃{R_γ : β ≤ γ < k} for β = 0..k-1, as bullet names over r-names.
inline std::vector<Name> chain_family(const StagedInstance& inst)
{
    const Universe& u = inst.universe();
    std::vector<Name> out;
    for (std::uint32_t beta = 0; beta < u.site_count(); ++beta) {
        SiteSet tail;
        for (std::uint32_t g = beta; g < u.site_count(); ++g) {
            tail.push_back(g);
        }
        out.push_back(d_name(u, tail));
    }
    return out;
}

} // namespace symext

#endif // SYMEXT_INSTANCES_HPP
