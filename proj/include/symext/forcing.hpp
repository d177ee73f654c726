#ifndef SYMEXT_FORCING_HPP
#define SYMEXT_FORCING_HPP

// A decidable forcing relation for the {Eq, Mem, Not, And} fragment over a
// finite poset. The semantic oracle quantifies over generic filters; the
// recursive oracle runs the textbook density recursion over the whole
// finite condition space. The two are cross-checked, never trusted alone.

#include <symext/core.hpp>
#include <symext/errors.hpp>
#include <symext/hfset.hpp>
#include <symext/names.hpp>
#include <symext/permutation.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace symext {

class Formula {
public:
    enum class Kind { eq, mem, negation, conjunction };

    static Formula eq(Name lhs, Name rhs) { return Formula(Kind::eq, lhs, rhs, nullptr, nullptr); }
    static Formula mem(Name lhs, Name rhs) { return Formula(Kind::mem, lhs, rhs, nullptr, nullptr); }
    static Formula negation(Formula f)
    {
        return Formula(Kind::negation, {}, {}, std::make_shared<Formula>(std::move(f)), nullptr);
    }
    static Formula conjunction(Formula a, Formula b)
    {
        return Formula(Kind::conjunction, {}, {}, std::make_shared<Formula>(std::move(a)),
                       std::make_shared<Formula>(std::move(b)));
    }

    Kind kind() const noexcept { return kind_; }
    bool atomic() const noexcept { return kind_ == Kind::eq || kind_ == Kind::mem; }
    Name lhs() const noexcept { return lhs_; }
    Name rhs() const noexcept { return rhs_; }
    const Formula& left() const { return *left_; }
    const Formula& right() const { return *right_; }

    /// Shared universe of every name in the formula (nullptr if none).
    const Universe* universe() const { return universe_; }

    std::size_t depth() const noexcept
    {
        switch (kind_) {
        case Kind::negation:
            return 1 + left_->depth();
        case Kind::conjunction:
            return 1 + std::max(left_->depth(), right_->depth());
        default:
            return 0;
        }
    }

    /// Prefix text form: `(mem <name> <name>)`, `(eq ...)`, `(not ...)`, `(and ... ...)`.
    std::string to_string() const
    {
        switch (kind_) {
        case Kind::eq:
            return "(eq " + lhs_.to_string() + " " + rhs_.to_string() + ")";
        case Kind::mem:
            return "(mem " + lhs_.to_string() + " " + rhs_.to_string() + ")";
        case Kind::negation:
            return "(not " + left_->to_string() + ")";
        case Kind::conjunction:
            return "(and " + left_->to_string() + " " + right_->to_string() + ")";
        }
        return {};
    }

    friend bool operator==(const Formula& a, const Formula& b)
    {
        if (a.kind_ != b.kind_) {
            return false;
        }
        switch (a.kind_) {
        case Kind::eq:
        case Kind::mem:
            return a.lhs_ == b.lhs_ && a.rhs_ == b.rhs_;
        case Kind::negation:
            return *a.left_ == *b.left_;
        case Kind::conjunction:
            return *a.left_ == *b.left_ && *a.right_ == *b.right_;
        }
        return false;
    }

private:
    Formula(Kind k, Name l, Name r, std::shared_ptr<const Formula> a, std::shared_ptr<const Formula> b)
        : kind_(k), lhs_(l), rhs_(r), left_(std::move(a)), right_(std::move(b))
    {
        if (atomic()) {
            universe_ = common_universe(lhs_.universe(), rhs_.universe());
        } else {
            universe_ = left_->universe_;
            if (right_) {
                universe_ = common_universe(universe_, right_->universe_);
            }
        }
    }

    Kind kind_;
    Name lhs_;
    Name rhs_;
    std::shared_ptr<const Formula> left_;
    std::shared_ptr<const Formula> right_;
    const Universe* universe_ = nullptr;
};

/// πφ: the action applied to every name of the formula.
inline Formula act_formula(const FiberPermutation& pi, const Formula& f)
{
    switch (f.kind()) {
    case Formula::Kind::eq:
        return Formula::eq(act_name(pi, f.lhs()), act_name(pi, f.rhs()));
    case Formula::Kind::mem:
        return Formula::mem(act_name(pi, f.lhs()), act_name(pi, f.rhs()));
    case Formula::Kind::negation:
        return Formula::negation(act_formula(pi, f.left()));
    case Formula::Kind::conjunction:
        return Formula::conjunction(act_formula(pi, f.left()), act_formula(pi, f.right()));
    }
    return f;
}

/// Truth of φ in the interpretation by G.
inline bool holds(const Formula& f, const GenericFilter& g)
{
    switch (f.kind()) {
    case Formula::Kind::eq:
        return interpret(f.lhs(), g) == interpret(f.rhs(), g);
    case Formula::Kind::mem:
        return interpret(f.rhs(), g).contains(interpret(f.lhs(), g));
    case Formula::Kind::negation:
        return !holds(f.left(), g);
    case Formula::Kind::conjunction:
        return holds(f.left(), g) && holds(f.right(), g);
    }
    return false;
}

enum class ForcingMode { recursive, semantic };

inline const char* to_string(ForcingMode m) { return m == ForcingMode::recursive ? "recursive" : "semantic"; }

// ---------------------------------------------------------------------------

/// p ⊩ φ iff φ holds under every generic filter containing p. Truth tables
/// over the total assignments are cached per formula.
class SemanticOracle {
public:
    static constexpr std::size_t table_cell_limit = 22;

    explicit SemanticOracle(const Universe& u) : universe_(&u) {}

    const Universe& universe() const noexcept { return *universe_; }

    bool forces(const Condition& p, const Formula& f)
    {
        return !counterexample(p, f).has_value();
    }

    /// A generic filter containing p under which φ fails, if any.
    std::optional<GenericFilter> counterexample(const Condition& p, const Formula& f)
    {
        common_universe(universe_, p.universe());
        common_universe(universe_, f.universe());
        GenericStream stream(*universe_, p);
        if (universe_->cell_count() <= table_cell_limit) {
            const auto& table = truth_table(f);
            const std::size_t n = universe_->cell_count();
            std::uint64_t base = 0;
            for (const auto& a : p.entries()) {
                if (a.bit) {
                    base |= std::uint64_t{1} << (n - 1 - universe_->cell_index(a.cell));
                }
            }
            auto free = stream.free_cells();
            const std::size_t m = free.size();
            for (std::uint64_t k = 0; k < stream.size(); ++k) {
                std::uint64_t idx = base;
                for (std::size_t i = 0; i < m; ++i) {
                    if ((k >> (m - 1 - i)) & 1u) {
                        idx |= std::uint64_t{1} << (n - 1 - free[i]);
                    }
                }
                if (!table[idx]) {
                    return stream.at(k);
                }
            }
            return std::nullopt;
        }
        for (auto g : stream) {
            if (!holds(f, g)) {
                return g;
            }
        }
        return std::nullopt;
    }

private:
    const std::vector<std::uint8_t>& truth_table(const Formula& f)
    {
        const std::string key = f.to_string();
        if (auto it = tables_.find(key); it != tables_.end()) {
            return it->second;
        }
        GenericStream all(*universe_, Condition{});
        std::vector<std::uint8_t> table(all.size());
        for (std::uint64_t k = 0; k < all.size(); ++k) {
            table[k] = holds(f, all.at(k)) ? 1 : 0;
        }
        return tables_.emplace(key, std::move(table)).first->second;
    }

    const Universe* universe_;
    std::unordered_map<std::string, std::vector<std::uint8_t>> tables_;
};

// ---------------------------------------------------------------------------

/// The recursive definition of forcing, evaluated over every condition of
/// the poset at once. Conditions are indexed in base 3 (digit 0: cell
/// undefined, 1: bit 0, 2: bit 1); only conditions within the universe's
/// size bounds take part.
class RecursiveOracle {
public:
    static constexpr std::size_t cell_limit = 12;

    explicit RecursiveOracle(const Universe& u) : universe_(&u)
    {
        const std::size_t n = u.cell_count();
        if (n > cell_limit) {
            throw TooLarge("recursive forcing over " + std::to_string(n) + " cells");
        }
        pow3_.resize(n + 1, 1);
        for (std::size_t i = 1; i <= n; ++i) {
            pow3_[i] = pow3_[i - 1] * 3;
        }
        total_ = pow3_[n];
        valid_.assign(total_, 0);
        std::vector<std::vector<std::size_t>> by_size(n + 1);
        std::vector<Assignment> entries;
        for (std::size_t idx = 0; idx < total_; ++idx) {
            entries.clear();
            std::size_t rest = idx;
            for (std::size_t c = 0; c < n; ++c) {
                const auto digit = rest % 3;
                rest /= 3;
                if (digit != 0) {
                    entries.push_back({u.cell_at(c), digit == 2});
                }
            }
            if (u.admits_entries(entries)) {
                valid_[idx] = 1;
                by_size[entries.size()].push_back(idx);
            }
        }
        for (std::size_t k = n + 1; k-- > 0;) {
            order_.insert(order_.end(), by_size[k].begin(), by_size[k].end());
        }
    }

    const Universe& universe() const noexcept { return *universe_; }

    bool forces(const Condition& p, const Formula& f)
    {
        common_universe(universe_, p.universe());
        const std::size_t idx = index_of(p);
        if (!valid_[idx]) {
            throw CutoffExceeded("condition outside the poset: " + p.to_string());
        }
        return forcing_set(f)[idx] != 0;
    }

    std::size_t index_of(const Condition& p) const
    {
        std::size_t idx = 0;
        for (const auto& a : p.entries()) {
            idx += pow3_[universe_->cell_index(a.cell)] * (a.bit ? 2 : 1);
        }
        return idx;
    }

    /// The set of conditions forcing φ, as a 0/1 vector over condition indices.
    const std::vector<std::uint8_t>& forcing_set(const Formula& f)
    {
        common_universe(universe_, f.universe());
        const std::string key = f.to_string();
        if (auto it = formula_sets_.find(key); it != formula_sets_.end()) {
            return it->second;
        }
        Set out;
        switch (f.kind()) {
        case Formula::Kind::eq:
            out = eq_set(f.lhs(), f.rhs());
            break;
        case Formula::Kind::mem:
            out = mem_set(f.lhs(), f.rhs());
            break;
        case Formula::Kind::negation: {
            // p ⊩ ¬ψ iff no q ≤ p forces ψ
            const Set reach = reaches(forcing_set(f.left()));
            out.assign(total_, 0);
            for (std::size_t i = 0; i < total_; ++i) {
                out[i] = valid_[i] && !reach[i];
            }
            break;
        }
        case Formula::Kind::conjunction: {
            const Set a = forcing_set(f.left());
            const Set& b = forcing_set(f.right());
            out.assign(total_, 0);
            for (std::size_t i = 0; i < total_; ++i) {
                out[i] = a[i] && b[i];
            }
            break;
        }
        }
        return formula_sets_.emplace(key, std::move(out)).first->second;
    }

private:
    using Set = std::vector<std::uint8_t>;

    /// { q : q ≤ s }
    const Set& below(const Condition& s)
    {
        const std::size_t sidx = index_of(s);
        if (auto it = below_.find(sidx); it != below_.end()) {
            return it->second;
        }
        std::vector<std::pair<std::size_t, std::size_t>> digits;
        for (const auto& a : s.entries()) {
            digits.push_back({universe_->cell_index(a.cell), a.bit ? 2u : 1u});
        }
        Set out(total_, 0);
        for (std::size_t q = 0; q < total_; ++q) {
            if (!valid_[q]) {
                continue;
            }
            bool ok = true;
            for (auto [cell, digit] : digits) {
                if ((q / pow3_[cell]) % 3 != digit) {
                    ok = false;
                    break;
                }
            }
            out[q] = ok;
        }
        return below_.emplace(sidx, std::move(out)).first->second;
    }

    template <typename Fn>
    void for_each_child(std::size_t q, Fn&& fn) const
    {
        const std::size_t n = pow3_.size() - 1;
        for (std::size_t c = 0; c < n; ++c) {
            if ((q / pow3_[c]) % 3 == 0) {
                for (std::size_t digit = 1; digit <= 2; ++digit) {
                    const std::size_t child = q + digit * pow3_[c];
                    if (valid_[child]) {
                        fn(child);
                    }
                }
            }
        }
    }

    /// { q : some r ≤ q lies in s }
    Set reaches(const Set& s) const
    {
        Set out(total_, 0);
        for (auto q : order_) {
            bool hit = s[q] != 0;
            if (!hit) {
                for_each_child(q, [&](std::size_t c) { hit = hit || out[c]; });
            }
            out[q] = hit;
        }
        return out;
    }

    /// { p : s is dense below p }
    Set dense_below(const Set& s) const
    {
        const Set reach = reaches(s);
        Set out(total_, 0);
        for (auto p : order_) {
            bool ok = reach[p] != 0;
            if (ok) {
                for_each_child(p, [&](std::size_t c) { ok = ok && out[c]; });
            }
            out[p] = ok;
        }
        return out;
    }

    /// p ⊩ a = b iff for every (s1, c1) ∈ a the set
    /// { q ≤ p : q ≤ s1 → ∃(s2, c2) ∈ b. q ≤ s2 ∧ q ⊩ c1 = c2 } is dense
    /// below p, and symmetrically for the entries of b.
    Set eq_set(Name a, Name b)
    {
        const auto key = std::make_pair(a.node(), b.node());
        if (auto it = eq_sets_.find(key); it != eq_sets_.end()) {
            return it->second;
        }
        Set out = valid_;
        auto half = [&](Name from, Name to, bool from_is_lhs) {
            for (const auto& e1 : from.entries()) {
                const Set& in_e1 = below(e1.condition);
                Set good(total_, 0);
                for (std::size_t q = 0; q < total_; ++q) {
                    good[q] = valid_[q] && !in_e1[q];
                }
                for (const auto& e2 : to.entries()) {
                    const Set& in_e2 = below(e2.condition);
                    const Set sub = from_is_lhs ? eq_set(e1.name, e2.name) : eq_set(e2.name, e1.name);
                    for (std::size_t q = 0; q < total_; ++q) {
                        good[q] = good[q] || (in_e2[q] && sub[q]);
                    }
                }
                const Set dense = dense_below(good);
                for (std::size_t q = 0; q < total_; ++q) {
                    out[q] = out[q] && dense[q];
                }
            }
        };
        half(a, b, true);
        half(b, a, false);
        return eq_sets_.emplace(key, std::move(out)).first->second;
    }

    /// p ⊩ a ∈ b iff { q : ∃(s, c) ∈ b. q ≤ s ∧ q ⊩ c = a } is dense below p.
    Set mem_set(Name a, Name b)
    {
        Set hit(total_, 0);
        for (const auto& e : b.entries()) {
            const Set& in_e = below(e.condition);
            const Set sub = eq_set(e.name, a);
            for (std::size_t q = 0; q < total_; ++q) {
                hit[q] = hit[q] || (in_e[q] && sub[q]);
            }
        }
        return dense_below(hit);
    }

    struct PairHash {
        std::size_t operator()(const std::pair<const detail::NameNode*, const detail::NameNode*>& k) const noexcept
        {
            return detail::hash_mix(std::hash<const void*>{}(k.first), std::hash<const void*>{}(k.second));
        }
    };

    const Universe* universe_;
    std::vector<std::size_t> pow3_;
    std::size_t total_ = 0;
    Set valid_;
    std::vector<std::size_t> order_; // most cells first
    std::unordered_map<std::size_t, Set> below_;
    std::unordered_map<std::pair<const detail::NameNode*, const detail::NameNode*>, Set, PairHash> eq_sets_;
    std::unordered_map<std::string, Set> formula_sets_;
};

// ---------------------------------------------------------------------------

/// Both oracles over one universe, with their caches.
class ForcingEngine {
public:
    explicit ForcingEngine(const Universe& u) : semantic_(u) {}

    const Universe& universe() const noexcept { return semantic_.universe(); }

    bool forces(const Condition& p, const Formula& f, ForcingMode mode)
    {
        if (mode == ForcingMode::semantic) {
            return semantic_.forces(p, f);
        }
        return recursive().forces(p, f);
    }

    SemanticOracle& semantic() { return semantic_; }

    RecursiveOracle& recursive()
    {
        if (!recursive_) {
            recursive_.emplace(semantic_.universe());
        }
        return *recursive_;
    }

private:
    SemanticOracle semantic_;
    std::optional<RecursiveOracle> recursive_;
};

inline bool forces(const Universe& u, const Condition& p, const Formula& f, ForcingMode mode = ForcingMode::semantic)
{
    ForcingEngine engine(u);
    return engine.forces(p, f, mode);
}

struct SymmetryVerdict {
    bool equal = true;
    bool semantic_lhs = false;  // p ⊩ φ
    bool semantic_rhs = false;  // πp ⊩ πφ
    std::optional<bool> recursive_lhs;
    std::optional<bool> recursive_rhs;
    /// On a semantic mismatch: a generic filter through the forcing side's
    /// condition refuting the other side's formula.
    std::optional<GenericFilter> witness;
    std::string detail;
};

/// Compares p ⊩ φ with πp ⊩ πφ in the semantic mode and, when requested,
/// the recursive mode. A mismatch means an engine defect.
inline SymmetryVerdict symmetry_lemma_check(ForcingEngine& engine, const FiberPermutation& pi, const Condition& p,
                                            const Formula& f, bool with_recursive = true)
{
    SymmetryVerdict v;
    const Condition pp = act_condition(pi, p);
    const Formula pf = act_formula(pi, f);
    auto& sem = engine.semantic();
    auto lhs_cx = sem.counterexample(p, f);
    auto rhs_cx = sem.counterexample(pp, pf);
    v.semantic_lhs = !lhs_cx;
    v.semantic_rhs = !rhs_cx;
    if (v.semantic_lhs != v.semantic_rhs) {
        v.equal = false;
        v.witness = v.semantic_lhs ? *rhs_cx : *lhs_cx;
        v.detail = "semantic mismatch";
    }
    if (with_recursive) {
        v.recursive_lhs = engine.recursive().forces(p, f);
        v.recursive_rhs = engine.recursive().forces(pp, pf);
        if (*v.recursive_lhs != *v.recursive_rhs) {
            v.equal = false;
            v.detail += v.detail.empty() ? "recursive mismatch" : "; recursive mismatch";
        }
    }
    return v;
}

inline SymmetryVerdict symmetry_lemma_check(const Universe& u, const FiberPermutation& pi, const Condition& p,
                                            const Formula& f)
{
    ForcingEngine engine(u);
    return symmetry_lemma_check(engine, pi, p, f, u.cell_count() <= RecursiveOracle::cell_limit);
}

// ---------------------------------------------------------------------------
// Formula text

/// Resolves a symbolic name token such as `r:a:0`; returns nullopt when the
/// token is unknown.
using NameResolver = std::function<std::optional<Name>(std::string_view)>;

namespace detail {

inline Name parse_term(TextCursor& in, const Universe* u, const NameResolver& resolve)
{
    const char ch = in.peek();
    if (ch == '{') {
        return parse_name(in, u);
    }
    if (ch == '(') {
        in.expect('(');
        const auto head = in.token("(){} \t\r\n");
        std::vector<Name> args;
        while (!in.accept(')')) {
            args.push_back(parse_term(in, u, resolve));
        }
        if (head == "pair") {
            if (args.size() != 2) {
                in.fail("pair takes two names");
            }
            return pair_name(args[0], args[1]);
        }
        if (head == "bullet") {
            return bullet_name(args);
        }
        in.fail("unknown name constructor '" + head + "'");
    }
    const auto tok = in.token("(){} \t\r\n");
    if (tok.size() > 1 && tok[0] == '\'') {
        const auto digits = tok.substr(1);
        if (!std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            in.fail("bad ordinal '" + tok + "'");
        }
        return check_name(HFSet::ordinal(std::stoul(digits)));
    }
    if (resolve) {
        if (auto n = resolve(tok)) {
            return *n;
        }
    }
    in.fail("unknown name '" + tok + "'");
}

inline Formula parse_formula(TextCursor& in, const Universe* u, const NameResolver& resolve)
{
    in.expect('(');
    const auto head = in.token("(){} \t\r\n");
    Formula out = Formula::eq(Name{}, Name{});
    if (head == "eq" || head == "mem") {
        const Name a = parse_term(in, u, resolve);
        const Name b = parse_term(in, u, resolve);
        out = head == "eq" ? Formula::eq(a, b) : Formula::mem(a, b);
    } else if (head == "not") {
        out = Formula::negation(parse_formula(in, u, resolve));
    } else if (head == "and") {
        Formula a = parse_formula(in, u, resolve);
        Formula b = parse_formula(in, u, resolve);
        out = Formula::conjunction(std::move(a), std::move(b));
    } else {
        in.fail("unknown connective '" + head + "'");
    }
    in.expect(')');
    return out;
}

} // namespace detail

/// Parses `(mem A B)`, `(eq A B)`, `(not F)`, `(and F G)`. Name terms are
/// nested-list literals, `'N` for the check name of the ordinal N,
/// `(pair A B)`, `(bullet A ...)`, or symbols handed to the resolver.
inline Formula parse_formula(std::string_view text, const Universe* u, const NameResolver& resolve = {})
{
    detail::TextCursor in(text);
    Formula f = detail::parse_formula(in, u, resolve);
    if (!in.at_end()) {
        in.fail("trailing input");
    }
    return f;
}

} // namespace symext

#endif // SYMEXT_FORCING_HPP
