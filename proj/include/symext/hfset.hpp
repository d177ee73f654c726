#ifndef SYMEXT_HFSET_HPP
#define SYMEXT_HFSET_HPP

// Hereditarily finite sets, hash-consed. Equality is handle identity, which
// coincides with extensional equality because every node is interned with
// its elements deduplicated and canonically ordered.

#include <symext/core.hpp>

#include <algorithm>
#include <compare>
#include <cstddef>
#include <deque>
#include <mutex>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace symext {

class HFSet {
    struct Node {
        std::vector<const Node*> elements;
        std::size_t rank = 0;
        std::size_t hash = 0;
    };

public:
    /// The empty set.
    HFSet() : node_(intern({})) {}

    static HFSet make(std::vector<HFSet> elements)
    {
        std::sort(elements.begin(), elements.end(), [](HFSet a, HFSet b) { return (a <=> b) < 0; });
        elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
        std::vector<const Node*> raw;
        raw.reserve(elements.size());
        for (auto e : elements) {
            raw.push_back(e.node_);
        }
        return HFSet(intern(std::move(raw)));
    }

    /// The von Neumann ordinal n = {0, ..., n-1}.
    static HFSet ordinal(std::size_t n)
    {
        std::vector<HFSet> elems;
        HFSet current;
        for (std::size_t i = 0; i < n; ++i) {
            elems.push_back(current);
            current = make(elems);
        }
        return current;
    }

    /// The Kuratowski pair {{a}, {a, b}}.
    static HFSet pair(HFSet a, HFSet b) { return make({make({a}), make({a, b})}); }

    std::size_t size() const noexcept { return node_->elements.size(); }
    bool empty() const noexcept { return node_->elements.empty(); }
    std::size_t rank() const noexcept { return node_->rank; }

    std::vector<HFSet> elements() const
    {
        std::vector<HFSet> out;
        out.reserve(size());
        for (auto* n : node_->elements) {
            out.push_back(HFSet(n));
        }
        return out;
    }

    bool contains(HFSet x) const noexcept
    {
        return std::find(node_->elements.begin(), node_->elements.end(), x.node_) != node_->elements.end();
    }

    bool subset_of(HFSet other) const noexcept
    {
        return std::all_of(node_->elements.begin(), node_->elements.end(),
                           [&](const Node* e) { return other.contains(HFSet(e)); });
    }

    /// If this set is a von Neumann ordinal, its value.
    std::optional<std::size_t> as_ordinal() const
    {
        const std::size_t n = size();
        if (rank() != n) {
            return std::nullopt;
        }
        return *this == ordinal(n) ? std::optional<std::size_t>(n) : std::nullopt;
    }

    std::size_t hash() const noexcept { return node_->hash; }

    std::string to_string() const
    {
        std::string out = "{";
        bool first = true;
        for (auto* e : node_->elements) {
            if (!first) {
                out += ',';
            }
            first = false;
            out += HFSet(e).to_string();
        }
        out += '}';
        return out;
    }

    friend bool operator==(HFSet a, HFSet b) noexcept { return a.node_ == b.node_; }

    /// Structural total order: rank, then size, then elements.
    friend std::strong_ordering operator<=>(HFSet a, HFSet b) noexcept { return compare(a.node_, b.node_); }

private:
    explicit HFSet(const Node* n) : node_(n) {}

    static std::strong_ordering compare(const Node* a, const Node* b) noexcept
    {
        if (a == b) {
            return std::strong_ordering::equal;
        }
        if (auto c = a->rank <=> b->rank; c != 0) {
            return c;
        }
        if (auto c = a->elements.size() <=> b->elements.size(); c != 0) {
            return c;
        }
        for (std::size_t i = 0; i < a->elements.size(); ++i) {
            if (auto c = compare(a->elements[i], b->elements[i]); c != 0) {
                return c;
            }
        }
        return std::strong_ordering::equal;
    }

    struct NodeHash {
        std::size_t operator()(const Node* n) const noexcept { return n->hash; }
    };
    struct NodeEq {
        bool operator()(const Node* a, const Node* b) const noexcept { return a->elements == b->elements; }
    };

    static const Node* intern(std::vector<const Node*> elements)
    {
        Node candidate;
        candidate.hash = 0x51ed27u;
        for (auto* e : elements) {
            candidate.rank = std::max(candidate.rank, e->rank + 1);
            candidate.hash = detail::hash_mix(candidate.hash, e->hash);
        }
        candidate.elements = std::move(elements);

        static std::mutex mutex;
        static std::deque<Node> storage;
        static std::unordered_set<const Node*, NodeHash, NodeEq> table;
        std::lock_guard lock(mutex);
        if (auto it = table.find(&candidate); it != table.end()) {
            return *it;
        }
        storage.push_back(std::move(candidate));
        table.insert(&storage.back());
        return &storage.back();
    }

    const Node* node_;
};

struct HFSetHash {
    std::size_t operator()(HFSet s) const noexcept { return s.hash(); }
};

} // namespace symext

#endif // SYMEXT_HFSET_HPP
