#ifndef SYMEXT_NAMES_HPP
#define SYMEXT_NAMES_HPP

// P-names over a finite forcing poset. Names are hash-consed: structurally
// equal names share one node, so equality is handle identity.

#include <symext/core.hpp>
#include <symext/errors.hpp>
#include <symext/hfset.hpp>

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <deque>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace symext {

namespace detail {
struct NameNode;
}

struct NameEntry;

class Name {
public:
    /// The empty name.
    Name();

    static Name make(std::vector<NameEntry> entries);

    std::span<const NameEntry> entries() const noexcept;
    std::size_t size() const noexcept;
    bool empty() const noexcept { return size() == 0; }
    std::size_t rank() const noexcept;
    std::size_t hash() const noexcept;

    /// The universe of the conditions occurring hereditarily; nullptr when
    /// every condition is 1_P.
    const Universe* universe() const noexcept;

    /// Every index pair touched by a condition occurring hereditarily.
    std::span<const IndexPair> footprint() const noexcept;

    std::string to_string() const;

    const detail::NameNode* node() const noexcept { return node_; }

    friend bool operator==(Name a, Name b) noexcept { return a.node_ == b.node_; }
    friend std::strong_ordering operator<=>(Name a, Name b) noexcept;

private:
    explicit Name(const detail::NameNode* n) : node_(n) {}
    static const detail::NameNode* intern(std::vector<NameEntry> entries);

    const detail::NameNode* node_;
};

struct NameEntry {
    Condition condition;
    Name name;

    friend bool operator==(const NameEntry&, const NameEntry&) = default;
    friend std::strong_ordering operator<=>(const NameEntry& a, const NameEntry& b) noexcept
    {
        if (auto c = a.condition <=> b.condition; c != 0) {
            return c;
        }
        return a.name <=> b.name;
    }
};

struct NameHash {
    std::size_t operator()(Name n) const noexcept { return n.hash(); }
};

namespace detail {

struct NameNode {
    std::vector<NameEntry> entries;
    std::size_t rank = 0;
    std::size_t hash = 0;
    const Universe* universe = nullptr;
    std::vector<IndexPair> footprint;
};

struct NameNodeHash {
    std::size_t operator()(const NameNode* n) const noexcept { return n->hash; }
};
struct NameNodeEq {
    bool operator()(const NameNode* a, const NameNode* b) const noexcept { return a->entries == b->entries; }
};

} // namespace detail

inline Name::Name() : node_(intern({})) {}

inline Name Name::make(std::vector<NameEntry> entries)
{
    std::sort(entries.begin(), entries.end());
    entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
    return Name(intern(std::move(entries)));
}

inline std::span<const NameEntry> Name::entries() const noexcept { return node_->entries; }
inline std::size_t Name::size() const noexcept { return node_->entries.size(); }
inline std::size_t Name::rank() const noexcept { return node_->rank; }
inline std::size_t Name::hash() const noexcept { return node_->hash; }
inline const Universe* Name::universe() const noexcept { return node_->universe; }
inline std::span<const IndexPair> Name::footprint() const noexcept { return node_->footprint; }

inline std::strong_ordering operator<=>(Name a, Name b) noexcept
{
    if (a.node_ == b.node_) {
        return std::strong_ordering::equal;
    }
    if (auto c = a.rank() <=> b.rank(); c != 0) {
        return c;
    }
    if (auto c = a.size() <=> b.size(); c != 0) {
        return c;
    }
    auto ea = a.entries();
    auto eb = b.entries();
    return std::lexicographical_compare_three_way(ea.begin(), ea.end(), eb.begin(), eb.end());
}

inline const detail::NameNode* Name::intern(std::vector<NameEntry> entries)
{
    detail::NameNode candidate;
    candidate.hash = 0x6e616d65u;
    for (const auto& e : entries) {
        candidate.rank = std::max(candidate.rank, e.name.rank() + 1);
        candidate.hash = detail::hash_mix(detail::hash_mix(candidate.hash, e.condition.hash()), e.name.hash());
        candidate.universe = common_universe(candidate.universe, e.condition.universe());
        candidate.universe = common_universe(candidate.universe, e.name.universe());
        for (const auto& a : e.condition.entries()) {
            candidate.footprint.push_back(a.cell.pair());
        }
        auto fp = e.name.footprint();
        candidate.footprint.insert(candidate.footprint.end(), fp.begin(), fp.end());
    }
    std::sort(candidate.footprint.begin(), candidate.footprint.end());
    candidate.footprint.erase(std::unique(candidate.footprint.begin(), candidate.footprint.end()),
                              candidate.footprint.end());
    candidate.entries = std::move(entries);

    static std::mutex mutex;
    static std::deque<detail::NameNode> storage;
    static std::unordered_set<const detail::NameNode*, detail::NameNodeHash, detail::NameNodeEq> table;
    std::lock_guard lock(mutex);
    if (auto it = table.find(&candidate); it != table.end()) {
        return *it;
    }
    storage.push_back(std::move(candidate));
    table.insert(&storage.back());
    return &storage.back();
}

/// Nested-list text form: `{(<cond> <name>) ...}` with `<cond>` either `1`
/// or `[site:fiber:slot=bit,...]`.
inline std::string Name::to_string() const
{
    std::string out = "{";
    bool first = true;
    for (const auto& e : entries()) {
        if (!first) {
            out += ' ';
        }
        first = false;
        out += '(';
        out += e.condition.to_string();
        out += ' ';
        out += e.name.to_string();
        out += ')';
    }
    out += '}';
    return out;
}

/// The canonical name x̌ = {(1, y̌) : y ∈ x}.
inline Name check_name(HFSet x)
{
    std::vector<NameEntry> entries;
    for (auto y : x.elements()) {
        entries.push_back({Condition{}, check_name(y)});
    }
    return Name::make(std::move(entries));
}

/// {x_i}• = {(1, x_i)}.
inline Name bullet_name(std::span<const Name> xs)
{
    std::vector<NameEntry> entries;
    const Universe* u = nullptr;
    for (auto x : xs) {
        u = common_universe(u, x.universe());
        entries.push_back({Condition{}, x});
    }
    return Name::make(std::move(entries));
}

inline Name bullet_name(std::initializer_list<Name> xs)
{
    return bullet_name(std::span<const Name>(xs.begin(), xs.size()));
}

/// (x, y)• = {{x}•, {x, y}•}•.
inline Name pair_name(Name x, Name y)
{
    common_universe(x.universe(), y.universe());
    return bullet_name({bullet_name({x}), bullet_name({x, y})});
}

namespace detail {

inline HFSet interpret_memo(Name x, const GenericFilter& g, std::unordered_map<const NameNode*, HFSet>& memo)
{
    if (auto it = memo.find(x.node()); it != memo.end()) {
        return it->second;
    }
    std::vector<HFSet> elems;
    for (const auto& e : x.entries()) {
        if (g.contains(e.condition)) {
            elems.push_back(interpret_memo(e.name, g, memo));
        }
    }
    HFSet out = HFSet::make(std::move(elems));
    memo.emplace(x.node(), out);
    return out;
}

} // namespace detail

/// x^G = { y^G : (p, y) ∈ x, p ∈ G }.
inline HFSet interpret(Name x, const GenericFilter& g)
{
    common_universe(x.universe(), &g.universe());
    std::unordered_map<const detail::NameNode*, HFSet> memo;
    return detail::interpret_memo(x, g, memo);
}

/// Every sub-name reachable from x, x included, in canonical order.
inline std::vector<Name> closure(Name x)
{
    std::vector<Name> out;
    std::unordered_set<const detail::NameNode*> seen;
    std::vector<Name> stack{x};
    while (!stack.empty()) {
        Name n = stack.back();
        stack.pop_back();
        if (!seen.insert(n.node()).second) {
            continue;
        }
        out.push_back(n);
        for (const auto& e : n.entries()) {
            stack.push_back(e.name);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Text parsing

namespace detail {

class TextCursor {
public:
    explicit TextCursor(std::string_view text) : text_(text) {}

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            advance();
        }
    }

    bool at_end()
    {
        skip_space();
        return pos_ >= text_.size();
    }

    char peek()
    {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    void expect(char ch)
    {
        if (peek() != ch) {
            fail(std::string("expected '") + ch + "'");
        }
        advance();
    }

    bool accept(char ch)
    {
        if (peek() == ch) {
            advance();
            return true;
        }
        return false;
    }

    /// A run of characters not in the delimiter set.
    std::string token(std::string_view delimiters = "()[]{},:= \t\r\n")
    {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && delimiters.find(text_[pos_]) == std::string_view::npos) {
            advance();
        }
        if (start == pos_) {
            fail("expected a token");
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    std::uint32_t number()
    {
        auto t = token();
        if (!std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            fail("expected a number, got '" + t + "'");
        }
        return static_cast<std::uint32_t>(std::stoul(t));
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, column_); }

private:
    void advance()
    {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

inline Condition parse_condition(TextCursor& in, const Universe* u)
{
    if (in.peek() == '1') {
        in.token();
        return {};
    }
    in.expect('[');
    if (u == nullptr) {
        in.fail("condition literal without a universe");
    }
    std::vector<Assignment> entries;
    while (!in.accept(']')) {
        if (!entries.empty()) {
            in.expect(',');
        }
        auto label = in.token();
        auto site = u->site_of(label);
        if (!site) {
            in.fail("unknown site '" + label + "'");
        }
        in.expect(':');
        auto fiber = in.number();
        in.expect(':');
        auto slot = in.number();
        in.expect('=');
        auto bit = in.number();
        if (bit > 1) {
            in.fail("bit must be 0 or 1");
        }
        entries.push_back({{*site, fiber, slot}, bit == 1});
    }
    try {
        return Condition::make_unbounded(*u, std::move(entries));
    } catch (const InvalidCondition& e) {
        in.fail(e.what());
    }
}

inline Name parse_name(TextCursor& in, const Universe* u)
{
    in.expect('{');
    std::vector<NameEntry> entries;
    while (!in.accept('}')) {
        in.expect('(');
        auto cond = parse_condition(in, u);
        auto child = parse_name(in, u);
        in.expect(')');
        entries.push_back({std::move(cond), child});
    }
    return Name::make(std::move(entries));
}

} // namespace detail

/// Parses the nested-list text form produced by Name::to_string().
inline Name parse_name(std::string_view text, const Universe* u)
{
    detail::TextCursor in(text);
    Name n = detail::parse_name(in, u);
    if (!in.at_end()) {
        in.fail("trailing input");
    }
    return n;
}

} // namespace symext

#endif // SYMEXT_NAMES_HPP
