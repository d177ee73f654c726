#ifndef SYMEXT_CORE_HPP
#define SYMEXT_CORE_HPP

// Finite forcing posets: cells, conditions as partial bit-assignments,
// the extension order, compatibility and generic filters.

#include <symext/errors.hpp>

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace symext {

namespace detail {

inline std::uint64_t fnv1a(std::string_view text) noexcept
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::size_t hash_mix(std::size_t seed, std::size_t value) noexcept
{
    return seed ^ (value + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

} // namespace detail

/// An index pair (site, fiber): the unit permuted by the symmetry group.
struct IndexPair {
    std::uint32_t site = 0;
    std::uint32_t fiber = 0;

    friend auto operator<=>(const IndexPair&, const IndexPair&) = default;
};

/// A cell ((site, fiber), slot) of the forcing poset.
struct Cell {
    std::uint32_t site = 0;
    std::uint32_t fiber = 0;
    std::uint32_t slot = 0;

    IndexPair pair() const noexcept { return {site, fiber}; }

    friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Assignment {
    Cell cell;
    bool bit = false;

    friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

struct SiteShape {
    std::uint32_t fibers = 0;
    std::uint32_t slots = 0;

    friend bool operator==(const SiteShape&, const SiteShape&) = default;
};

class Condition;

/// The cell layout of one finite forcing poset.
///
/// Universes are interned for the lifetime of the process: two universes with
/// the same layout are the same object, so conditions and names may hold plain
/// pointers to them. Sites are either poset elements (plain mode) or stages
/// (staged mode, when per-stage Easton bounds are present).
class Universe {
public:
    static const Universe& intern(std::vector<std::string> labels,
                                  std::vector<SiteShape> shapes,
                                  std::size_t domain_cutoff,
                                  std::vector<std::size_t> easton_bounds = {})
    {
        if (labels.size() != shapes.size()) {
            throw InvalidInstance("label/shape count mismatch");
        }
        if (labels.empty()) {
            throw InvalidInstance("no sites");
        }
        if (!easton_bounds.empty() && easton_bounds.size() != shapes.size()) {
            throw InvalidInstance("one Easton bound per stage is required");
        }
        Universe u;
        u.labels_ = std::move(labels);
        u.shapes_ = std::move(shapes);
        u.domain_cutoff_ = domain_cutoff;
        u.easton_ = std::move(easton_bounds);
        std::size_t offset = 0;
        for (const auto& s : u.shapes_) {
            u.offsets_.push_back(offset);
            offset += std::size_t{s.fibers} * s.slots;
        }
        u.cell_count_ = offset;
        u.description_ = u.describe_layout();
        u.id_ = detail::fnv1a(u.description_) | 1u;

        static std::mutex mutex;
        static std::map<std::string, std::unique_ptr<const Universe>> registry;
        std::lock_guard lock(mutex);
        auto [it, inserted] = registry.try_emplace(u.description_, nullptr);
        if (inserted) {
            it->second = std::make_unique<const Universe>(std::move(u));
        }
        return *it->second;
    }

    std::uint64_t id() const noexcept { return id_; }
    const std::string& description() const noexcept { return description_; }

    std::size_t site_count() const noexcept { return shapes_.size(); }
    const std::string& label(std::uint32_t site) const { return labels_.at(site); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    SiteShape shape(std::uint32_t site) const { return shapes_.at(site); }

    std::optional<std::uint32_t> site_of(std::string_view label) const
    {
        for (std::uint32_t i = 0; i < labels_.size(); ++i) {
            if (labels_[i] == label) {
                return i;
            }
        }
        return std::nullopt;
    }

    std::size_t cell_count() const noexcept { return cell_count_; }
    std::size_t domain_cutoff() const noexcept { return domain_cutoff_; }
    bool staged() const noexcept { return !easton_.empty(); }
    std::size_t easton_bound(std::uint32_t stage) const { return easton_.at(stage); }

    bool contains(const Cell& c) const noexcept
    {
        return c.site < shapes_.size() && c.fiber < shapes_[c.site].fibers &&
               c.slot < shapes_[c.site].slots;
    }

    bool contains(const IndexPair& p) const noexcept
    {
        return p.site < shapes_.size() && p.fiber < shapes_[p.site].fibers;
    }

    std::size_t cell_index(const Cell& c) const
    {
        if (!contains(c)) {
            throw InvalidCondition("cell out of bounds");
        }
        return offsets_[c.site] + std::size_t{c.fiber} * shapes_[c.site].slots + c.slot;
    }

    Cell cell_at(std::size_t index) const
    {
        if (index >= cell_count_) {
            throw InvalidCondition("cell index out of range");
        }
        auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
        const auto site = static_cast<std::uint32_t>(std::distance(offsets_.begin(), it) - 1);
        const std::size_t local = index - offsets_[site];
        const auto slots = shapes_[site].slots;
        return {site, static_cast<std::uint32_t>(local / slots), static_cast<std::uint32_t>(local % slots)};
    }

    /// All index pairs in canonical (site, fiber) order.
    std::vector<IndexPair> pairs() const
    {
        std::vector<IndexPair> out;
        for (std::uint32_t s = 0; s < shapes_.size(); ++s) {
            for (std::uint32_t f = 0; f < shapes_[s].fibers; ++f) {
                out.push_back({s, f});
            }
        }
        return out;
    }

    /// Size bounds a condition must obey: the domain cutoff, and in staged
    /// mode the per-stage Easton bound on cells at or below each stage.
    bool admits_entries(std::span<const Assignment> entries) const
    {
        if (entries.size() > domain_cutoff_) {
            return false;
        }
        if (easton_.empty()) {
            return true;
        }
        std::vector<std::size_t> per_stage(shapes_.size(), 0);
        for (const auto& a : entries) {
            ++per_stage[a.cell.site];
        }
        std::size_t below = 0;
        for (std::size_t i = 0; i < per_stage.size(); ++i) {
            below += per_stage[i];
            if (below > easton_[i]) {
                return false;
            }
        }
        return true;
    }

    std::string cell_text(const Cell& c) const
    {
        return label(c.site) + ":" + std::to_string(c.fiber) + ":" + std::to_string(c.slot);
    }

    std::string pair_text(const IndexPair& p) const
    {
        return "(" + label(p.site) + "," + std::to_string(p.fiber) + ")";
    }

private:
    Universe() = default;

    std::string describe_layout() const
    {
        std::ostringstream os;
        os << "sites=";
        for (std::size_t i = 0; i < shapes_.size(); ++i) {
            os << (i ? "," : "") << labels_[i] << ':' << shapes_[i].fibers << 'x' << shapes_[i].slots;
        }
        os << ";d=" << domain_cutoff_;
        if (!easton_.empty()) {
            os << ";easton=";
            for (std::size_t i = 0; i < easton_.size(); ++i) {
                os << (i ? "," : "") << easton_[i];
            }
        }
        return os.str();
    }

    std::vector<std::string> labels_;
    std::vector<SiteShape> shapes_;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> easton_;
    std::size_t cell_count_ = 0;
    std::size_t domain_cutoff_ = 0;
    std::string description_;
    std::uint64_t id_ = 0;
};

/// Resolves the shared universe of two operands; nullptr stands for the
/// universe-neutral empty condition.
inline const Universe* common_universe(const Universe* a, const Universe* b)
{
    if (a == nullptr) {
        return b;
    }
    if (b == nullptr || a == b) {
        return a;
    }
    throw MismatchedInstance(a->description() + " vs " + b->description());
}

/// A finite partial assignment of bits to cells, in canonical cell order.
///
/// The empty condition is the maximum 1_P and belongs to every universe.
class Condition {
public:
    Condition() = default;

    static Condition make(const Universe& u, std::vector<Assignment> entries)
    {
        auto c = normalized(&u, std::move(entries));
        if (!u.admits_entries(c.entries_)) {
            throw CutoffExceeded("condition of size " + std::to_string(c.size()) + " over " +
                                 u.description());
        }
        return c;
    }

    /// Like make() but skips the size bounds; used for merge witnesses
    /// that may be unrepresentable in the poset.
    static Condition make_unbounded(const Universe& u, std::vector<Assignment> entries)
    {
        return normalized(&u, std::move(entries));
    }

    const Universe* universe() const noexcept { return universe_; }
    std::uint64_t universe_id() const noexcept { return universe_ ? universe_->id() : 0; }

    std::span<const Assignment> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    std::optional<bool> at(const Cell& c) const noexcept
    {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), c,
                                   [](const Assignment& a, const Cell& x) { return a.cell < x; });
        if (it == entries_.end() || it->cell != c) {
            return std::nullopt;
        }
        return it->bit;
    }

    bool touches(const IndexPair& p) const noexcept
    {
        return std::any_of(entries_.begin(), entries_.end(),
                           [&](const Assignment& a) { return a.cell.pair() == p; });
    }

    bool within_bounds() const
    {
        return universe_ == nullptr || universe_->admits_entries(entries_);
    }

    std::size_t hash() const noexcept
    {
        std::size_t h = static_cast<std::size_t>(universe_id());
        for (const auto& a : entries_) {
            h = detail::hash_mix(h, (std::size_t{a.cell.site} << 40) ^ (std::size_t{a.cell.fiber} << 20) ^
                                        (std::size_t{a.cell.slot} << 1) ^ std::size_t{a.bit});
        }
        return h;
    }

    std::string to_string() const
    {
        if (entries_.empty()) {
            return "1";
        }
        std::string out = "[";
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (i) {
                out += ',';
            }
            out += universe_->cell_text(entries_[i].cell);
            out += entries_[i].bit ? "=1" : "=0";
        }
        out += ']';
        return out;
    }

    friend bool operator==(const Condition& a, const Condition& b) noexcept
    {
        return a.universe_id() == b.universe_id() && a.entries_ == b.entries_;
    }

    friend std::strong_ordering operator<=>(const Condition& a, const Condition& b) noexcept
    {
        if (auto c = a.universe_id() <=> b.universe_id(); c != 0) {
            return c;
        }
        if (auto c = a.entries_.size() <=> b.entries_.size(); c != 0) {
            return c;
        }
        return std::lexicographical_compare_three_way(a.entries_.begin(), a.entries_.end(),
                                                      b.entries_.begin(), b.entries_.end());
    }

private:
    static Condition normalized(const Universe* u, std::vector<Assignment> entries)
    {
        std::sort(entries.begin(), entries.end());
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (!u->contains(entries[i].cell)) {
                throw InvalidCondition("cell out of bounds in " + u->description());
            }
            if (i > 0 && entries[i].cell == entries[i - 1].cell && entries[i].bit != entries[i - 1].bit) {
                throw InvalidCondition("contradictory assignment at " + u->cell_text(entries[i].cell));
            }
        }
        entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
        Condition c;
        c.universe_ = entries.empty() ? nullptr : u;
        c.entries_ = std::move(entries);
        return c;
    }

    const Universe* universe_ = nullptr;
    std::vector<Assignment> entries_;
};

struct ConditionHash {
    std::size_t operator()(const Condition& c) const noexcept { return c.hash(); }
};

/// p extends q (p <= q): q's assignment is a sub-map of p's.
inline bool extends(const Condition& p, const Condition& q)
{
    common_universe(p.universe(), q.universe());
    auto pe = p.entries();
    auto qe = q.entries();
    std::size_t i = 0;
    for (const auto& a : qe) {
        while (i < pe.size() && pe[i].cell < a.cell) {
            ++i;
        }
        if (i == pe.size() || pe[i] != a) {
            return false;
        }
    }
    return true;
}

struct Compatibility {
    bool compatible = false;
    /// The union of both assignments, present iff compatible.
    std::optional<Condition> witness;
    /// The witness exceeds the universe's size bounds.
    bool cutoff_exceeded = false;

    explicit operator bool() const noexcept { return compatible; }
};

inline Compatibility compatible(const Condition& p, const Condition& q)
{
    const Universe* u = common_universe(p.universe(), q.universe());
    std::vector<Assignment> merged;
    auto pe = p.entries();
    auto qe = q.entries();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < pe.size() || j < qe.size()) {
        if (j == qe.size() || (i < pe.size() && pe[i].cell < qe[j].cell)) {
            merged.push_back(pe[i++]);
        } else if (i == pe.size() || qe[j].cell < pe[i].cell) {
            merged.push_back(qe[j++]);
        } else {
            if (pe[i].bit != qe[j].bit) {
                return {};
            }
            merged.push_back(pe[i]);
            ++i;
            ++j;
        }
    }
    Compatibility out;
    out.compatible = true;
    if (u == nullptr) {
        out.witness = Condition{};
        return out;
    }
    out.witness = Condition::make_unbounded(*u, std::move(merged));
    out.cutoff_exceeded = !out.witness->within_bounds();
    return out;
}

/// Drops every cell above stage `stage` (the projection to P^{<=stage}).
inline Condition stage_restrict(const Condition& p, std::uint32_t stage)
{
    if (p.empty()) {
        return p;
    }
    std::vector<Assignment> kept;
    for (const auto& a : p.entries()) {
        if (a.cell.site <= stage) {
            kept.push_back(a);
        }
    }
    return Condition::make_unbounded(*p.universe(), std::move(kept));
}

/// Visits every condition of the universe with at most `max_dom` cells that
/// obeys the universe's size bounds: by size, then cell combination in
/// lexicographic order, then bit pattern.
template <typename Fn>
void for_each_condition(const Universe& u, std::size_t max_dom, Fn&& fn)
{
    const std::size_t n = u.cell_count();
    max_dom = std::min({max_dom, n, u.domain_cutoff()});
    std::vector<Cell> cells(n);
    for (std::size_t i = 0; i < n; ++i) {
        cells[i] = u.cell_at(i);
    }
    std::vector<std::size_t> pick;
    std::vector<Assignment> entries;
    for (std::size_t k = 0; k <= max_dom; ++k) {
        pick.resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            pick[i] = i;
        }
        while (true) {
            for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
                entries.clear();
                for (std::size_t i = 0; i < k; ++i) {
                    entries.push_back({cells[pick[i]], ((bits >> (k - 1 - i)) & 1u) != 0});
                }
                if (u.admits_entries(entries)) {
                    fn(Condition::make_unbounded(u, entries));
                }
            }
            // next combination
            std::size_t i = k;
            while (i > 0 && pick[i - 1] == n - k + (i - 1)) {
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
}

inline std::vector<Condition> all_conditions(const Universe& u, std::size_t max_dom)
{
    std::vector<Condition> out;
    for_each_condition(u, max_dom, [&](Condition c) { out.push_back(std::move(c)); });
    return out;
}

/// The up-closure of a total assignment. With a stage cap set the filter
/// only contains conditions living in P^{<=cap}, which mirrors G ∩ P^{<=i}.
class GenericFilter {
public:
    GenericFilter(const Universe& u, std::vector<std::uint8_t> total)
        : universe_(&u), total_(std::move(total))
    {
        if (total_.size() != u.cell_count()) {
            throw InvalidCondition("total assignment must cover every cell");
        }
    }

    const Universe& universe() const noexcept { return *universe_; }

    bool value(const Cell& c) const { return total_[universe_->cell_index(c)] != 0; }
    std::span<const std::uint8_t> bits() const noexcept { return total_; }

    std::optional<std::uint32_t> stage_cap() const noexcept { return cap_; }

    GenericFilter restricted_to_stage(std::uint32_t stage) const
    {
        GenericFilter g = *this;
        g.cap_ = stage;
        return g;
    }

    bool contains(const Condition& p) const
    {
        if (p.empty()) {
            return true;
        }
        common_universe(universe_, p.universe());
        for (const auto& a : p.entries()) {
            if (cap_ && a.cell.site > *cap_) {
                return false;
            }
            if ((total_[universe_->cell_index(a.cell)] != 0) != a.bit) {
                return false;
            }
        }
        return true;
    }

    std::string to_string() const
    {
        std::string s;
        for (auto b : total_) {
            s += b ? '1' : '0';
        }
        return s;
    }

private:
    const Universe* universe_;
    std::vector<std::uint8_t> total_;
    std::optional<std::uint32_t> cap_;
};

/// The generic filters containing a condition, in lexicographic order of
/// their total assignments (cell 0 most significant).
class GenericStream {
public:
    GenericStream(const Universe& u, Condition below) : universe_(&u), below_(std::move(below))
    {
        common_universe(&u, below_.universe());
        for (std::size_t i = 0; i < u.cell_count(); ++i) {
            if (!below_.at(u.cell_at(i))) {
                free_.push_back(i);
            }
        }
        if (free_.size() > 40) {
            throw TooLarge("2^" + std::to_string(free_.size()) + " generic filters");
        }
    }

    std::uint64_t size() const noexcept { return std::uint64_t{1} << free_.size(); }
    std::span<const std::size_t> free_cells() const noexcept { return free_; }

    GenericFilter at(std::uint64_t k) const
    {
        std::vector<std::uint8_t> total(universe_->cell_count(), 0);
        for (const auto& a : below_.entries()) {
            total[universe_->cell_index(a.cell)] = a.bit ? 1 : 0;
        }
        const std::size_t m = free_.size();
        for (std::size_t i = 0; i < m; ++i) {
            total[free_[i]] = static_cast<std::uint8_t>((k >> (m - 1 - i)) & 1u);
        }
        return GenericFilter(*universe_, std::move(total));
    }

    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = GenericFilter;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        iterator(const GenericStream* s, std::uint64_t k) : stream_(s), k_(k) {}

        GenericFilter operator*() const { return stream_->at(k_); }
        iterator& operator++()
        {
            ++k_;
            return *this;
        }
        iterator operator++(int)
        {
            auto tmp = *this;
            ++k_;
            return tmp;
        }
        friend bool operator==(const iterator& a, const iterator& b) noexcept { return a.k_ == b.k_; }

    private:
        const GenericStream* stream_ = nullptr;
        std::uint64_t k_ = 0;
    };

    iterator begin() const { return {this, 0}; }
    iterator end() const { return {this, size()}; }

private:
    const Universe* universe_;
    Condition below_;
    std::vector<std::size_t> free_;
};

inline GenericStream enumerate_generics(const Universe& u, const Condition& below = {})
{
    return GenericStream(u, below);
}

} // namespace symext

#endif // SYMEXT_CORE_HPP
