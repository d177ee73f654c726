#ifndef SYMEXT_PERMUTATION_HPP
#define SYMEXT_PERMUTATION_HPP

// Finitely supported, site-preserving permutations of index pairs and their
// action on conditions and names.

#include <symext/core.hpp>
#include <symext/errors.hpp>
#include <symext/names.hpp>

#include <algorithm>
#include <compare>
#include <mutex>
#include <optional>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace symext {

class FiberPermutation {
public:
    using Mapping = std::pair<IndexPair, IndexPair>;

    /// The identity.
    FiberPermutation() = default;

    static FiberPermutation from_mapping(std::vector<Mapping> mapping)
    {
        std::erase_if(mapping, [](const Mapping& m) { return m.first == m.second; });
        std::sort(mapping.begin(), mapping.end());
        std::vector<IndexPair> sources;
        std::vector<IndexPair> targets;
        for (const auto& [from, to] : mapping) {
            if (from.site != to.site) {
                throw InvalidInstance("permutation must preserve the site");
            }
            sources.push_back(from);
            targets.push_back(to);
        }
        std::sort(targets.begin(), targets.end());
        if (std::adjacent_find(sources.begin(), sources.end()) != sources.end() || sources != targets) {
            throw InvalidInstance("mapping is not a bijection of its moved set");
        }
        FiberPermutation p;
        p.mapping_ = std::move(mapping);
        return p;
    }

    static FiberPermutation transposition(IndexPair a, IndexPair b)
    {
        return from_mapping({{a, b}, {b, a}});
    }

    /// Builds a permutation from disjoint cycles.
    static FiberPermutation from_cycles(const std::vector<std::vector<IndexPair>>& cycles)
    {
        std::vector<Mapping> m;
        for (const auto& cyc : cycles) {
            for (std::size_t i = 0; i < cyc.size(); ++i) {
                m.push_back({cyc[i], cyc[(i + 1) % cyc.size()]});
            }
        }
        return from_mapping(std::move(m));
    }

    IndexPair operator()(IndexPair x) const noexcept
    {
        auto it = std::lower_bound(mapping_.begin(), mapping_.end(), x,
                                   [](const Mapping& m, const IndexPair& v) { return m.first < v; });
        return (it != mapping_.end() && it->first == x) ? it->second : x;
    }

    bool is_identity() const noexcept { return mapping_.empty(); }

    /// 𝔻_π, the moved set, sorted.
    std::vector<IndexPair> moved() const
    {
        std::vector<IndexPair> out;
        for (const auto& m : mapping_) {
            out.push_back(m.first);
        }
        return out;
    }

    const std::vector<Mapping>& mapping() const noexcept { return mapping_; }

    FiberPermutation inverse() const
    {
        std::vector<Mapping> inv;
        for (const auto& [a, b] : mapping_) {
            inv.push_back({b, a});
        }
        return from_mapping(std::move(inv));
    }

    /// (lhs * rhs)(x) = lhs(rhs(x)).
    friend FiberPermutation operator*(const FiberPermutation& lhs, const FiberPermutation& rhs)
    {
        std::vector<IndexPair> domain;
        for (const auto& m : lhs.mapping_) {
            domain.push_back(m.first);
        }
        for (const auto& m : rhs.mapping_) {
            domain.push_back(m.first);
        }
        std::sort(domain.begin(), domain.end());
        domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
        std::vector<Mapping> out;
        for (auto x : domain) {
            out.push_back({x, lhs(rhs(x))});
        }
        return from_mapping(std::move(out));
    }

    /// Disjoint cycles, each starting at its least element, in order.
    std::vector<std::vector<IndexPair>> cycles() const
    {
        std::vector<std::vector<IndexPair>> out;
        std::vector<IndexPair> seen;
        for (const auto& [start, _] : mapping_) {
            if (std::find(seen.begin(), seen.end(), start) != seen.end()) {
                continue;
            }
            std::vector<IndexPair> cyc;
            IndexPair x = start;
            do {
                cyc.push_back(x);
                seen.push_back(x);
                x = (*this)(x);
            } while (x != start);
            out.push_back(std::move(cyc));
        }
        return out;
    }

    std::string to_string(const Universe& u) const
    {
        if (is_identity()) {
            return "()";
        }
        std::string s;
        for (const auto& cyc : cycles()) {
            s += '(';
            for (std::size_t i = 0; i < cyc.size(); ++i) {
                s += (i ? " " : "") + u.label(cyc[i].site) + "," + std::to_string(cyc[i].fiber);
            }
            s += ')';
        }
        return s;
    }

    std::size_t hash() const noexcept
    {
        std::size_t h = 0x7065726du;
        for (const auto& [a, b] : mapping_) {
            h = detail::hash_mix(h, (std::size_t{a.site} << 32) ^ a.fiber);
            h = detail::hash_mix(h, (std::size_t{b.site} << 32) ^ b.fiber);
        }
        return h;
    }

    friend bool operator==(const FiberPermutation&, const FiberPermutation&) = default;
    friend auto operator<=>(const FiberPermutation& a, const FiberPermutation& b)
    {
        if (auto c = a.mapping_.size() <=> b.mapping_.size(); c != 0) {
            return c;
        }
        return a.mapping_ <=> b.mapping_;
    }

private:
    std::vector<Mapping> mapping_;
};

struct FiberPermutationHash {
    std::size_t operator()(const FiberPermutation& p) const noexcept { return p.hash(); }
};

/// πp: the cell ((z, α), γ) of p moves to ((π(z, α)), γ) with the same bit.
inline Condition act_condition(const FiberPermutation& pi, const Condition& p)
{
    if (p.empty() || pi.is_identity()) {
        return p;
    }
    const Universe& u = *p.universe();
    std::vector<Assignment> out;
    out.reserve(p.size());
    for (const auto& a : p.entries()) {
        const IndexPair to = pi(a.cell.pair());
        if (!u.contains(to)) {
            throw MismatchedInstance("permutation moves " + u.pair_text(a.cell.pair()) + " outside the universe");
        }
        out.push_back({{to.site, to.fiber, a.cell.slot}, a.bit});
    }
    return Condition::make_unbounded(u, std::move(out));
}

namespace detail {

struct ActionKey {
    FiberPermutation pi;
    const NameNode* node;
    bool operator==(const ActionKey&) const = default;
};

struct ActionKeyHash {
    std::size_t operator()(const ActionKey& k) const noexcept
    {
        return hash_mix(k.pi.hash(), std::hash<const void*>{}(k.node));
    }
};

// Names are interned and never freed, so node pointers are stable keys.
class ActionCache {
public:
    static ActionCache& instance()
    {
        static ActionCache cache;
        return cache;
    }

    std::optional<Name> find(const FiberPermutation& pi, const NameNode* node)
    {
        std::lock_guard lock(mutex_);
        auto it = map_.find({pi, node});
        return it == map_.end() ? std::nullopt : std::optional<Name>(it->second);
    }

    void store(const FiberPermutation& pi, const NameNode* node, Name image)
    {
        std::lock_guard lock(mutex_);
        if (map_.size() > limit) {
            map_.clear();
        }
        map_.emplace(ActionKey{pi, node}, image);
    }

    static constexpr std::size_t limit = 1u << 22;

private:
    std::mutex mutex_;
    std::unordered_map<ActionKey, Name, ActionKeyHash> map_;
};

inline Name act_name_memo(const FiberPermutation& pi, Name x, std::unordered_map<const NameNode*, Name>& memo)
{
    if (auto it = memo.find(x.node()); it != memo.end()) {
        return it->second;
    }
    std::vector<NameEntry> entries;
    entries.reserve(x.size());
    for (const auto& e : x.entries()) {
        entries.push_back({act_condition(pi, e.condition), act_name_memo(pi, e.name, memo)});
    }
    Name out = Name::make(std::move(entries));
    memo.emplace(x.node(), out);
    return out;
}

} // namespace detail

/// The lifted action π̃x = {(πp, π̃y) : (p, y) ∈ x}. Results are cached
/// across calls per (π, x).
inline Name act_name(const FiberPermutation& pi, Name x)
{
    auto& cache = detail::ActionCache::instance();
    if (auto hit = cache.find(pi, x.node())) {
        return *hit;
    }
    std::unordered_map<const detail::NameNode*, Name> memo;
    Name out = detail::act_name_memo(pi, x, memo);
    cache.store(pi, x.node(), out);
    return out;
}

} // namespace symext

#endif // SYMEXT_PERMUTATION_HPP
