#ifndef SYMEXT_SYMMETRY_HPP
#define SYMEXT_SYMMETRY_HPP

// The group of fiber permutations, pointwise stabilizers fix(E), supports,
// the hereditarily-symmetric predicate and the normal-filter laws.

#include <symext/core.hpp>
#include <symext/errors.hpp>
#include <symext/names.hpp>
#include <symext/permutation.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace symext {

/// A finite set of index pairs, sorted. Filter elements are always
/// represented by such a witness E standing for fix(E).
class SupportSet {
public:
    SupportSet() = default;

    static SupportSet make(const Universe& u, std::vector<IndexPair> cells)
    {
        for (const auto& c : cells) {
            if (!u.contains(c)) {
                throw InvalidInstance("support cell out of bounds");
            }
        }
        return unchecked(std::move(cells));
    }

    static SupportSet unchecked(std::vector<IndexPair> cells)
    {
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        SupportSet s;
        s.cells_ = std::move(cells);
        return s;
    }

    const std::vector<IndexPair>& cells() const noexcept { return cells_; }
    std::size_t size() const noexcept { return cells_.size(); }
    bool empty() const noexcept { return cells_.empty(); }

    bool contains(const IndexPair& p) const noexcept { return std::binary_search(cells_.begin(), cells_.end(), p); }

    bool subset_of(const SupportSet& other) const
    {
        return std::includes(other.cells_.begin(), other.cells_.end(), cells_.begin(), cells_.end());
    }

    SupportSet united(const SupportSet& other) const
    {
        std::vector<IndexPair> all = cells_;
        all.insert(all.end(), other.cells_.begin(), other.cells_.end());
        return unchecked(std::move(all));
    }

    SupportSet image(const FiberPermutation& pi) const
    {
        std::vector<IndexPair> out;
        for (const auto& c : cells_) {
            out.push_back(pi(c));
        }
        return unchecked(std::move(out));
    }

    std::string to_string(const Universe& u) const
    {
        std::string s = "{";
        for (std::size_t i = 0; i < cells_.size(); ++i) {
            s += (i ? "," : "") + u.pair_text(cells_[i]);
        }
        return s + "}";
    }

    friend bool operator==(const SupportSet&, const SupportSet&) = default;
    friend auto operator<=>(const SupportSet& a, const SupportSet& b)
    {
        if (auto c = a.cells_.size() <=> b.cells_.size(); c != 0) {
            return c;
        }
        return a.cells_ <=> b.cells_;
    }

private:
    std::vector<IndexPair> cells_;
};

/// The group 𝒢 of site-preserving permutations of the universe's index
/// pairs, with the support cutoff c generating its filter. In staged mode a
/// stage cap restricts to 𝒢_i (permutations moving only stages ≤ i).
class SymmetryGroup {
public:
    SymmetryGroup(const Universe& u, std::size_t support_cutoff, std::optional<std::uint32_t> stage_cap = {})
        : universe_(&u), cutoff_(support_cutoff), cap_(stage_cap)
    {
    }

    const Universe& universe() const noexcept { return *universe_; }
    std::size_t support_cutoff() const noexcept { return cutoff_; }
    std::optional<std::uint32_t> stage_cap() const noexcept { return cap_; }

    SymmetryGroup restricted_to_stage(std::uint32_t stage) const { return SymmetryGroup(*universe_, cutoff_, stage); }

    bool site_movable(std::uint32_t site) const noexcept { return !cap_ || site <= *cap_; }

    /// Membership: site-preserving, inside the universe, moving only
    /// movable sites; in staged mode fewer than n_i pairs of stage i move.
    bool contains(const FiberPermutation& pi) const
    {
        std::vector<std::size_t> per_site(universe_->site_count(), 0);
        for (const auto& [from, to] : pi.mapping()) {
            if (!universe_->contains(from) || !universe_->contains(to) || !site_movable(from.site)) {
                return false;
            }
            ++per_site[from.site];
        }
        if (universe_->staged()) {
            for (std::uint32_t s = 0; s < per_site.size(); ++s) {
                if (per_site[s] >= universe_->shape(s).fibers) {
                    return false;
                }
            }
        }
        return true;
    }

    /// Every same-site fiber transposition of the group.
    std::vector<FiberPermutation> generators() const { return fix_generators(SupportSet{}); }

    /// Transpositions of two same-site fibers both outside E; they generate
    /// fix(E) inside the finite group.
    std::vector<FiberPermutation> fix_generators(const SupportSet& e) const
    {
        std::vector<FiberPermutation> out;
        for (std::uint32_t s = 0; s < universe_->site_count(); ++s) {
            if (!site_movable(s)) {
                continue;
            }
            const auto n = universe_->shape(s).fibers;
            for (std::uint32_t a = 0; a < n; ++a) {
                for (std::uint32_t b = a + 1; b < n; ++b) {
                    if (!e.contains({s, a}) && !e.contains({s, b})) {
                        out.push_back(FiberPermutation::transposition({s, a}, {s, b}));
                    }
                }
            }
        }
        return out;
    }

    /// All supports of size ≤ c, by size, then lexicographically.
    std::vector<SupportSet> supports() const { return supports_up_to(cutoff_); }

    std::vector<SupportSet> supports_up_to(std::size_t max_size) const
    {
        const auto pairs = universe_->pairs();
        std::vector<SupportSet> out;
        std::vector<std::size_t> pick;
        for (std::size_t k = 0; k <= std::min(max_size, pairs.size()); ++k) {
            pick.resize(k);
            for (std::size_t i = 0; i < k; ++i) {
                pick[i] = i;
            }
            while (true) {
                std::vector<IndexPair> cells;
                for (auto i : pick) {
                    cells.push_back(pairs[i]);
                }
                out.push_back(SupportSet::unchecked(std::move(cells)));
                std::size_t i = k;
                while (i > 0 && pick[i - 1] == pairs.size() - k + (i - 1)) {
                    --i;
                }
                if (i == 0) {
                    break;
                }
                ++pick[i - 1];
                for (std::size_t j = i; j < k; ++j) {
                    pick[j] = pick[j - 1] + 1;
                }
            }
        }
        return out;
    }

private:
    const Universe* universe_;
    std::size_t cutoff_;
    std::optional<std::uint32_t> cap_;
};

/// Products of at most `max_length` generators (identity included),
/// deduplicated and sorted.
inline std::vector<FiberPermutation> words_up_to(const std::vector<FiberPermutation>& generators,
                                                 std::size_t max_length)
{
    std::unordered_set<FiberPermutation, FiberPermutationHash> seen{FiberPermutation{}};
    std::vector<FiberPermutation> frontier{FiberPermutation{}};
    for (std::size_t len = 0; len < max_length; ++len) {
        std::vector<FiberPermutation> next;
        for (const auto& w : frontier) {
            for (const auto& g : generators) {
                auto p = w * g;
                if (seen.insert(p).second) {
                    next.push_back(std::move(p));
                }
            }
        }
        frontier = std::move(next);
    }
    std::vector<FiberPermutation> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end());
    return out;
}

/// The full subgroup generated by `generators`.
inline std::vector<FiberPermutation> generate_group(const std::vector<FiberPermutation>& generators,
                                                    std::size_t limit = 200000)
{
    std::unordered_set<FiberPermutation, FiberPermutationHash> seen{FiberPermutation{}};
    std::deque<FiberPermutation> queue{FiberPermutation{}};
    while (!queue.empty()) {
        auto w = std::move(queue.front());
        queue.pop_front();
        for (const auto& g : generators) {
            auto p = w * g;
            if (seen.insert(p).second) {
                if (seen.size() > limit) {
                    throw TooLarge("group exceeds " + std::to_string(limit) + " elements");
                }
                queue.push_back(std::move(p));
            }
        }
    }
    std::vector<FiberPermutation> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end());
    return out;
}

/// E is a support of x: every generator of fix(E) fixes x literally.
inline bool is_symmetric_under(const SymmetryGroup& group, Name x, const SupportSet& e)
{
    common_universe(&group.universe(), x.universe());
    for (const auto& g : group.fix_generators(e)) {
        if (act_name(g, x) != x) {
            return false;
        }
    }
    return true;
}

/// The least support of x with at most c cells, or nullopt.
///
/// Candidates go by size; within a size, supports drawn from the pairs the
/// name actually mentions come first, then lexicographic order. The middle
/// key matters when several supports generate the same fix(E) (with two
/// fibers per site, fixing (a,0) also fixes (a,1)).
inline std::optional<SupportSet> infer_min_support(const SymmetryGroup& group, Name x)
{
    common_universe(&group.universe(), x.universe());
    const auto fp = x.footprint();
    auto in_footprint = [&](const SupportSet& e) {
        return std::all_of(e.cells().begin(), e.cells().end(),
                           [&](const IndexPair& p) { return std::binary_search(fp.begin(), fp.end(), p); });
    };
    const auto all = group.supports();
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].size() == all[i].size()) {
            ++j;
        }
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = i; k < j; ++k) {
                if (in_footprint(all[k]) == (pass == 0) && is_symmetric_under(group, x, all[k])) {
                    return all[k];
                }
            }
        }
        i = j;
    }
    return std::nullopt;
}

/// x and every name occurring in it hereditarily have a support within c.
inline bool is_hs(const SymmetryGroup& group, Name x)
{
    for (auto n : closure(x)) {
        if (!infer_min_support(group, n)) {
            return false;
        }
    }
    return true;
}

struct ConjugationVerdict {
    bool equal = false;
    SupportSet image;                 // πE
    std::size_t conjugated_order = 0; // |π fix(E) π⁻¹|
    std::size_t image_order = 0;      // |fix(πE)|
    std::optional<FiberPermutation> witness;
};

/// Checks π·fix(E)·π⁻¹ = fix(πE) by generating both subgroups in full.
inline ConjugationVerdict conjugation_check(const SymmetryGroup& group, const FiberPermutation& pi, const SupportSet& e)
{
    ConjugationVerdict v;
    v.image = e.image(pi);
    for (const auto& c : v.image.cells()) {
        if (!group.universe().contains(c)) {
            throw InvalidInstance("πE leaves the universe");
        }
    }
    const auto inv = pi.inverse();
    std::vector<FiberPermutation> conj;
    for (const auto& g : generate_group(group.fix_generators(e))) {
        conj.push_back(pi * g * inv);
    }
    std::sort(conj.begin(), conj.end());
    const auto target = generate_group(group.fix_generators(v.image));
    v.conjugated_order = conj.size();
    v.image_order = target.size();
    v.equal = conj == target;
    if (!v.equal) {
        std::vector<FiberPermutation> diff;
        std::set_symmetric_difference(conj.begin(), conj.end(), target.begin(), target.end(),
                                      std::back_inserter(diff));
        if (!diff.empty()) {
            v.witness = diff.front();
        }
    }
    return v;
}

struct DcAssembly {
    Name name;
    std::vector<std::optional<SupportSet>> supports; // recorded support per element
    SupportSet union_support;
    /// Every element is HS and |⋃E_α| ≤ c: the intersection of the
    /// elements' symmetry groups is certified to lie in the filter.
    bool union_certified = false;
    bool hs = false;
    std::optional<SupportSet> min_support;
    std::string route; // "union", "search" or "element-not-hs"
};

/// Assembles {t_α}• and decides whether it is HS. The union of the elements'
/// supports certifies HS when it stays within c; otherwise the verdict falls
/// back to a direct support search on the assembled name.
inline DcAssembly dc_assemble(const SymmetryGroup& group, const std::vector<Name>& ts)
{
    DcAssembly out;
    out.name = bullet_name(ts);
    bool elements_hs = true;
    for (auto t : ts) {
        auto s = is_hs(group, t) ? infer_min_support(group, t) : std::nullopt;
        if (!s) {
            elements_hs = false;
        } else {
            out.union_support = out.union_support.united(*s);
        }
        out.supports.push_back(std::move(s));
    }
    out.min_support = infer_min_support(group, out.name);
    if (!elements_hs) {
        out.route = "element-not-hs";
        out.hs = false;
        return out;
    }
    out.union_certified = out.union_support.size() <= group.support_cutoff();
    if (out.union_certified) {
        out.route = "union";
        out.hs = true;
    } else {
        out.route = "search";
        out.hs = out.min_support.has_value();
    }
    return out;
}

} // namespace symext

#endif // SYMEXT_SYMMETRY_HPP
