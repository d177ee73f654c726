#ifndef SYMEXT_CHECKS_HPP
#define SYMEXT_CHECKS_HPP

// Batch front end: instance spec files (JSON), named check suites, and one
// JSON report line per check unit.

#include <symext/symext.hpp>

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

namespace symext {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Instance spec

struct CheckBounds {
    std::size_t max_dom = 2;        // conditions swept by forcing suites
    std::size_t word_length = 3;    // permutations: products of ≤ this many generators
    std::size_t swap_max_dom = 4;   // conditions q swept by the swap kernel
    std::size_t wisc_max_dom = 1;   // conditions q swept by the WISC kernel
    std::size_t pool_max_dom = 1;   // conditions used to build stage-name pools
    std::size_t random_posets = 0;  // sampled posets for the embedding suite
    std::size_t random_poset_max = 8;
    std::uint64_t seed = 1;
    std::optional<std::size_t> max_support; // defaults to c
};

struct InstanceSpec {
    std::optional<BuiltInstance> plain;
    std::optional<BuiltStagedInstance> staged;
    std::vector<std::string> checks; // suite selection, empty = all
    CheckBounds bounds;
    std::string canonical; // canonical JSON text of the instance part
    std::string hash;      // hex digest of `canonical`

    bool is_staged() const noexcept { return staged.has_value(); }
    const Universe& universe() const { return plain ? plain->instance.universe() : staged->instance.universe(); }
    std::size_t support_cutoff() const
    {
        return plain ? plain->instance.support_cutoff() : staged->instance.support_cutoff();
    }
    std::size_t max_support() const { return bounds.max_support.value_or(support_cutoff()); }
    SymmetryGroup group() const { return plain ? plain->instance.group() : staged->instance.group(); }
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset)
{
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

/// Position of the first occurrence of `"key"` in the text, for errors
/// raised after parsing.
inline ParseError key_error(std::string_view text, const std::string& key, const std::string& what)
{
    const auto pos = text.find("\"" + key + "\"");
    auto [line, col] = line_column(text, pos == std::string_view::npos ? 0 : pos);
    return ParseError(what, line, col);
}

inline std::string hex64(std::uint64_t v)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

template <typename T>
T get_field(std::string_view text, const Json& obj, const std::string& key)
{
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw key_error(text, key, "field '" + key + "': " + e.what());
    }
}

inline void reject_unknown(std::string_view text, const Json& obj, std::initializer_list<std::string_view> known)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
            throw key_error(text, it.key(), "unknown field '" + it.key() + "'");
        }
    }
}

} // namespace detail

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"forcing-oracle", "symmetry-lemma", "hs",     "normality", "swap",
                                                 "wisc",           "embedding",      "chains", "density"};
    return names;
}

/// Parses and validates an instance spec.
///
/// Plain: {"poset": {"elements": [...], "leq": [[a, b], ...]}, "n", "v", "c", "d"?}
/// Staged: {"stages": [n_1, ...], "c", "v"? (slot cap), "easton"? [...]}
/// Optional in both: "checks": [suite, ...], "bounds": {...}.
inline InstanceSpec parse_instance_spec(std::string_view text)
{
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(e.what(), line, col);
    }
    if (!doc.is_object()) {
        throw ParseError("spec must be a JSON object", 1, 1);
    }
    detail::reject_unknown(text, doc, {"poset", "stages", "n", "v", "c", "d", "easton", "checks", "bounds"});

    InstanceSpec spec;
    if (doc.contains("checks")) {
        spec.checks = detail::get_field<std::vector<std::string>>(text, doc, "checks");
        for (const auto& s : spec.checks) {
            if (s != "all" && std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end()) {
                throw detail::key_error(text, "checks", "unknown suite '" + s + "'");
            }
        }
    }
    if (doc.contains("bounds")) {
        const Json& b = doc.at("bounds");
        if (!b.is_object()) {
            throw detail::key_error(text, "bounds", "bounds must be an object");
        }
        detail::reject_unknown(text, b,
                               {"max_dom", "word_length", "swap_max_dom", "wisc_max_dom", "pool_max_dom",
                                "random_posets", "random_poset_max", "seed", "max_support"});
        auto set = [&](const char* key, auto& field) {
            if (b.contains(key)) {
                field = detail::get_field<std::decay_t<decltype(field)>>(text, b, key);
            }
        };
        set("max_dom", spec.bounds.max_dom);
        set("word_length", spec.bounds.word_length);
        set("swap_max_dom", spec.bounds.swap_max_dom);
        set("wisc_max_dom", spec.bounds.wisc_max_dom);
        set("pool_max_dom", spec.bounds.pool_max_dom);
        set("random_posets", spec.bounds.random_posets);
        set("random_poset_max", spec.bounds.random_poset_max);
        set("seed", spec.bounds.seed);
        if (b.contains("max_support")) {
            spec.bounds.max_support = detail::get_field<std::size_t>(text, b, "max_support");
        }
    }

    const bool has_poset = doc.contains("poset");
    const bool has_stages = doc.contains("stages");
    if (has_poset == has_stages) {
        throw ParseError("exactly one of \"poset\" and \"stages\" is required", 1, 1);
    }
    auto get_u32 = [&](const char* key) { return detail::get_field<std::uint32_t>(text, doc, key); };
    if (!doc.contains("c")) {
        throw ParseError("missing field \"c\"", 1, 1);
    }
    const auto c = detail::get_field<std::size_t>(text, doc, "c");

    Json canonical;
    if (has_poset) {
        for (const char* key : {"n", "v"}) {
            if (!doc.contains(key)) {
                throw ParseError(std::string("missing field \"") + key + "\"", 1, 1);
            }
        }
        if (doc.contains("easton")) {
            throw detail::key_error(text, "easton", "\"easton\" applies to staged specs only");
        }
        const Json& p = doc.at("poset");
        if (!p.is_object()) {
            throw detail::key_error(text, "poset", "poset must be an object");
        }
        detail::reject_unknown(text, p, {"elements", "leq"});
        auto elements = detail::get_field<std::vector<std::string>>(text, p, "elements");
        std::vector<std::pair<std::string, std::string>> leq;
        if (p.contains("leq")) {
            for (const auto& pr : detail::get_field<std::vector<std::vector<std::string>>>(text, p, "leq")) {
                if (pr.size() != 2) {
                    throw detail::key_error(text, "leq", "order pairs have two elements");
                }
                leq.push_back({pr[0], pr[1]});
            }
        }
        std::optional<std::size_t> d;
        if (doc.contains("d")) {
            d = detail::get_field<std::size_t>(text, doc, "d");
        }
        spec.plain = build_instance(Poset::make(elements, leq), get_u32("n"), get_u32("v"), c, d);
        const auto& inst = spec.plain->instance;
        canonical["poset"]["elements"] = inst.poset().labels();
        Json rel = Json::array();
        for (const auto& [a, b] : inst.poset().relation()) {
            rel.push_back({a, b});
        }
        canonical["poset"]["leq"] = rel;
        canonical["n"] = inst.fiber_size();
        canonical["v"] = inst.value_bound();
        canonical["c"] = inst.support_cutoff();
        canonical["d"] = inst.domain_cutoff();
    } else {
        if (doc.contains("n") || doc.contains("d")) {
            throw detail::key_error(text, doc.contains("n") ? "n" : "d",
                                    "staged specs take stage sizes instead of \"n\"/\"d\"");
        }
        auto stages = detail::get_field<std::vector<std::uint32_t>>(text, doc, "stages");
        std::optional<std::uint32_t> cap;
        if (doc.contains("v")) {
            cap = get_u32("v");
        }
        std::vector<std::size_t> easton;
        if (doc.contains("easton")) {
            easton = detail::get_field<std::vector<std::size_t>>(text, doc, "easton");
        }
        spec.staged = build_staged_instance(stages, c, cap, easton);
        const Universe& u = spec.staged->instance.universe();
        canonical["stages"] = spec.staged->instance.stages();
        Json slots = Json::array();
        Json bounds = Json::array();
        for (std::uint32_t i = 0; i < u.site_count(); ++i) {
            slots.push_back(u.shape(i).slots);
            bounds.push_back(u.easton_bound(i));
        }
        canonical["slots"] = slots;
        canonical["easton"] = bounds;
        canonical["c"] = c;
    }
    spec.canonical = canonical.dump();
    spec.hash = detail::hex64(detail::fnv1a(spec.canonical));
    return spec;
}

// ---------------------------------------------------------------------------
// Shared fixtures for the suites

struct LabelledFormula {
    std::string label;
    Formula formula;
};

/// Resolves `r:z:α`, `R:z`, `D:z+z'` (`D:` for the empty set), `F` and
/// `min:z:α` against a plain instance's canonical family.
inline NameResolver family_resolver(const BuiltInstance& built)
{
    const Universe* u = &built.instance.universe();
    const Poset* poset = &built.instance.poset();
    return [u, poset](std::string_view tok) -> std::optional<Name> {
        auto split = [](std::string_view s, char sep) {
            std::vector<std::string> parts;
            std::size_t start = 0;
            while (true) {
                auto pos = s.find(sep, start);
                parts.emplace_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
                if (pos == std::string_view::npos) {
                    return parts;
                }
                start = pos + 1;
            }
        };
        auto site = [&](const std::string& label) -> std::optional<std::uint32_t> { return poset->index_of(label); };
        auto fiber = [&](const std::string& s) -> std::optional<std::uint32_t> {
            if (s.empty() || !std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
                return std::nullopt;
            }
            return static_cast<std::uint32_t>(std::stoul(s));
        };
        if (tok == "F") {
            std::vector<std::uint32_t> all;
            for (std::uint32_t z = 0; z < u->site_count(); ++z) {
                all.push_back(z);
            }
            return graph_name(*u, all);
        }
        auto parts = split(tok, ':');
        if (parts.size() == 3 && (parts[0] == "r" || parts[0] == "min")) {
            auto z = site(parts[1]);
            auto a = fiber(parts[2]);
            if (!z || !a || !u->contains(IndexPair{*z, *a})) {
                return std::nullopt;
            }
            return parts[0] == "r" ? r_name(*u, *z, *a) : min_name(*u, *z, *a);
        }
        if (parts.size() == 2 && parts[0] == "R") {
            auto z = site(parts[1]);
            return z ? std::optional<Name>(big_r_name(*u, *z)) : std::nullopt;
        }
        if (parts.size() == 2 && parts[0] == "D") {
            SiteSet q;
            if (!parts[1].empty()) {
                for (const auto& label : split(parts[1], '+')) {
                    auto z = site(label);
                    if (!z) {
                        return std::nullopt;
                    }
                    q.push_back(*z);
                }
            }
            std::sort(q.begin(), q.end());
            q.erase(std::unique(q.begin(), q.end()), q.end());
            return d_name(*u, q);
        }
        return std::nullopt;
    };
}

/// A fixed pool of atomic Eq/Mem formulas over canonical names and check
/// names of rank ≤ 2, plus Not and And layers. Uses the first two sites.
inline std::vector<LabelledFormula> standard_formula_pool(const BuiltInstance& built)
{
    const Universe& u = built.instance.universe();
    const std::uint32_t a = 0;
    const std::uint32_t b = u.site_count() > 1 ? 1 : 0;
    const auto& lab = built.instance.poset();
    const std::string la = lab.label(a);
    const std::string lb = lab.label(b);
    auto r = [&](std::uint32_t z, std::uint32_t f) { return r_name(u, z, f); };
    const Name c0 = check_name(HFSet::ordinal(0));
    const Name c1 = check_name(HFSet::ordinal(1));
    const Name c2 = check_name(HFSet::ordinal(2));
    const Name s1 = check_name(HFSet::make({HFSet::ordinal(1)}));
    const Name ra = big_r_name(u, a);
    const Name rb = big_r_name(u, b);
    const Name da = d_name(u, {a});
    SiteSet ab{a, b};
    ab.erase(std::unique(ab.begin(), ab.end()), ab.end());
    const Name dab = d_name(u, ab);
    std::vector<std::uint32_t> sites;
    for (std::uint32_t z = 0; z < u.site_count(); ++z) {
        sites.push_back(z);
    }
    const Name f = graph_name(u, sites);
    const std::string ra0 = "r:" + la + ":0";
    const std::string ra1 = "r:" + la + ":1";
    const std::string rb0 = "r:" + lb + ":0";
    const std::string rb1 = "r:" + lb + ":1";

    using F = Formula;
    std::vector<LabelledFormula> pool{
        {"(mem '0 " + ra0 + ")", F::mem(c0, r(a, 0))},
        {"(mem '1 " + ra0 + ")", F::mem(c1, r(a, 0))},
        {"(mem '0 " + rb1 + ")", F::mem(c0, r(b, 1))},
        {"(eq " + ra0 + " " + ra1 + ")", F::eq(r(a, 0), r(a, 1))},
        {"(eq " + ra0 + " '0)", F::eq(r(a, 0), c0)},
        {"(eq " + ra0 + " '1)", F::eq(r(a, 0), c1)},
        {"(eq " + rb0 + " '2)", F::eq(r(b, 0), c2)},
        {"(mem " + ra0 + " R:" + la + ")", F::mem(r(a, 0), ra)},
        {"(mem " + ra0 + " R:" + lb + ")", F::mem(r(a, 0), rb)},
        {"(eq R:" + la + " R:" + lb + ")", F::eq(ra, rb)},
        {"(mem '0 R:" + la + ")", F::mem(c0, ra)},
        {"(eq " + ra1 + " {'1})", F::eq(r(a, 1), s1)},
        {"(mem '1 '2)", F::mem(c1, c2)},
        {"(eq '0 '0)", F::eq(c0, c0)},
        {"(mem " + ra0 + " D:" + la + "+" + lb + ")", F::mem(r(a, 0), dab)},
        {"(eq D:" + la + " R:" + la + ")", F::eq(da, ra)},
        {"(mem " + rb0 + " D:" + la + ")", F::mem(r(b, 0), da)},
        {"(eq " + ra0 + " " + rb0 + ")", F::eq(r(a, 0), r(b, 0))},
        {"(mem (pair '0 R:" + la + ") F)", F::mem(pair_name(c0, ra), f)},
        {"(mem (pair '0 " + ra0 + ") (bullet (pair '0 " + ra0 + ") (pair '1 " + rb0 + ")))",
         F::mem(pair_name(c0, r(a, 0)), bullet_name({pair_name(c0, r(a, 0)), pair_name(c1, r(b, 0))}))},
        {"(not (mem '0 " + ra0 + "))", F::negation(F::mem(c0, r(a, 0)))},
        {"(not (eq " + ra0 + " " + ra1 + "))", F::negation(F::eq(r(a, 0), r(a, 1)))},
        {"(and (mem '0 " + ra0 + ") (mem '1 " + ra1 + "))",
         F::conjunction(F::mem(c0, r(a, 0)), F::mem(c1, r(a, 1)))},
        {"(and (not (mem '0 " + ra0 + ")) (eq R:" + la + " R:" + lb + "))",
         F::conjunction(F::negation(F::mem(c0, r(a, 0))), F::eq(ra, rb))},
    };
    return pool;
}

/// Every hereditarily finite set of rank ≤ 2: the subsets of {∅, {∅}}.
inline std::vector<HFSet> hf_sets_rank_le2()
{
    const HFSet e;
    const HFSet one = HFSet::make({e});
    return {e, one, HFSet::make({one}), HFSet::make({e, one})};
}

/// A bounded pool of P^{≤β}-names of rank ≤ 2: the empty name, every name
/// with one or two entries (p, ∅), every name with one entry (p, y) for y of
/// rank 1, plus the canonical names living at stage β and check names.
inline std::vector<Name> stage_name_pool(const BuiltStagedInstance& built, std::uint32_t beta, std::size_t pool_max_dom)
{
    const Universe& u = built.instance.universe();
    std::vector<Condition> conds;
    for_each_condition(u, pool_max_dom, [&](const Condition& p) {
        if (std::all_of(p.entries().begin(), p.entries().end(),
                        [&](const Assignment& a) { return a.cell.site <= beta; })) {
            conds.push_back(p);
        }
    });
    std::vector<Name> rank1;
    const Name empty;
    for (std::size_t i = 0; i < conds.size(); ++i) {
        rank1.push_back(Name::make({{conds[i], empty}}));
        for (std::size_t j = i + 1; j < conds.size(); ++j) {
            rank1.push_back(Name::make({{conds[i], empty}, {conds[j], empty}}));
        }
    }
    std::vector<Name> pool{empty};
    pool.insert(pool.end(), rank1.begin(), rank1.end());
    for (const auto& p : conds) {
        for (auto y : rank1) {
            pool.push_back(Name::make({{p, y}}));
        }
    }
    for (auto s : hf_sets_rank_le2()) {
        pool.push_back(check_name(s));
    }
    for (std::uint32_t a = 0; a < u.shape(beta).fibers; ++a) {
        pool.push_back(built.family.r.at({beta, a}));
    }
    pool.push_back(built.family.big_r.at(beta));
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return pool;
}

// ---------------------------------------------------------------------------
// Suites

struct RunOptions {
    std::size_t jobs = 1;
    std::optional<std::size_t> max_dom;
    std::optional<std::size_t> max_support;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> random_posets;
};

/// One check unit. `run` fills params-independent fields (verdict, counts,
/// witness); the harness adds suite, instance hash and elapsed time.
struct CheckUnit {
    std::string suite;
    Json params;
    std::function<Json()> run;
};

namespace detail {

inline Json unit_result(bool pass) { return Json{{"verdict", pass ? "pass" : "fail"}}; }

inline std::vector<Condition> sweep_conditions(const Universe& u, std::size_t max_dom)
{
    return all_conditions(u, max_dom);
}

inline std::string support_text(const Universe& u, const std::optional<SupportSet>& s)
{
    return s ? s->to_string(u) : std::string("NONE");
}

inline Json kernel_json(const KernelReport& r)
{
    Json j;
    j["kernel"] = r.kernel;
    Json in = Json::object();
    for (const auto& [k, v] : r.inputs) {
        in[k] = v;
    }
    j["inputs"] = in;
    Json w = Json::object();
    for (const auto& [k, v] : r.witnesses) {
        w[k] = v;
    }
    j["witnesses"] = w;
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    j["checks"] = checks;
    j["verdict"] = r.pass ? "pass" : "fail";
    j["scope"] = KernelReport::scope;
    return j;
}

inline Json permutation_json(const Universe& u, const FiberPermutation& pi)
{
    Json cycles = Json::array();
    for (const auto& cyc : pi.cycles()) {
        Json c = Json::array();
        for (const auto& p : cyc) {
            c.push_back(Json::array({u.label(p.site), p.fiber}));
        }
        cycles.push_back(c);
    }
    return cycles;
}

inline Json support_json(const Universe& u, const SupportSet& e)
{
    Json out = Json::array();
    for (const auto& p : e.cells()) {
        out.push_back(Json::array({u.label(p.site), p.fiber}));
    }
    return out;
}

inline Json site_set_json(const Universe& u, const SiteSet& q)
{
    Json out = Json::array();
    for (auto z : q) {
        out.push_back(u.label(z));
    }
    return out;
}

// -- forcing-oracle ----------------------------------------------------------

inline void forcing_oracle_units(const InstanceSpec& spec, std::size_t max_dom, std::vector<CheckUnit>& out)
{
    const BuiltInstance& built = *spec.plain;
    for (const auto& lf : standard_formula_pool(built)) {
        out.push_back({"forcing-oracle", {{"formula", lf.label}, {"max_dom", max_dom}}, [&built, lf, max_dom] {
                           const Universe& u = built.instance.universe();
                           ForcingEngine engine(u);
                           std::size_t checked = 0;
                           std::size_t mismatches = 0;
                           std::size_t forced = 0;
                           Json witness;
                           for (const auto& p : sweep_conditions(u, max_dom)) {
                               ++checked;
                               const bool sem = engine.forces(p, lf.formula, ForcingMode::semantic);
                               const bool rec = engine.forces(p, lf.formula, ForcingMode::recursive);
                               forced += sem ? 1 : 0;
                               if (sem != rec && mismatches++ == 0) {
                                   witness = {{"condition", p.to_string()}, {"semantic", sem}, {"recursive", rec}};
                               }
                           }
                           Json j = unit_result(mismatches == 0);
                           j["conditions"] = checked;
                           j["forced"] = forced;
                           j["mismatches"] = mismatches;
                           if (mismatches) {
                               j["witness"] = witness;
                           }
                           return j;
                       }});
    }
}

// -- symmetry-lemma ------------------------------------------------------------

inline void symmetry_lemma_units(const InstanceSpec& spec, std::size_t max_dom, std::vector<CheckUnit>& out)
{
    const BuiltInstance& built = *spec.plain;
    const Universe& u = built.instance.universe();
    const bool recursive = u.cell_count() <= RecursiveOracle::cell_limit;
    const auto perms = words_up_to(built.instance.group().generators(), spec.bounds.word_length);
    for (const auto& pi : perms) {
        for (const auto& lf : standard_formula_pool(built)) {
            Json params{{"pi", permutation_json(u, pi)},
                        {"formula", lf.label},
                        {"max_dom", max_dom},
                        {"modes", recursive ? Json::array({"semantic", "recursive"}) : Json::array({"semantic"})}};
            out.push_back({"symmetry-lemma", params, [&built, pi, lf, max_dom, recursive] {
                               const Universe& u = built.instance.universe();
                               ForcingEngine engine(u);
                               std::size_t checked = 0;
                               std::size_t failures = 0;
                               Json witness;
                               for (const auto& p : sweep_conditions(u, max_dom)) {
                                   ++checked;
                                   auto v = symmetry_lemma_check(engine, pi, p, lf.formula, recursive);
                                   if (!v.equal && failures++ == 0) {
                                       witness = {{"condition", p.to_string()}, {"detail", v.detail}};
                                       if (v.witness) {
                                           witness["generic"] = v.witness->to_string();
                                       }
                                   }
                               }
                               Json j = unit_result(failures == 0);
                               j["conditions"] = checked;
                               j["failures"] = failures;
                               if (failures) {
                                   j["witness"] = witness;
                               }
                               return j;
                           }});
        }
    }
}

// -- hs ------------------------------------------------------------------------

inline void hs_units_plain(const InstanceSpec& spec, std::vector<CheckUnit>& out)
{
    const BuiltInstance& built = *spec.plain;
    const Universe& u = built.instance.universe();
    const auto group = built.instance.group();
    // canonical-name algebra under every generator
    for (const auto& g : group.generators()) {
        out.push_back({"hs", {{"check", "name-algebra"}, {"pi", permutation_json(u, g)}}, [&built, g] {
                           const Universe& u = built.instance.universe();
                           std::size_t checked = 0;
                           std::vector<std::string> bad;
                           for (const auto& [p, x] : built.family.r) {
                               ++checked;
                               const auto to = g(p);
                               if (act_name(g, x) != built.family.r.at(to)) {
                                   bad.push_back("r" + u.pair_text(p));
                               }
                           }
                           for (std::size_t z = 0; z < built.family.big_r.size(); ++z) {
                               ++checked;
                               if (act_name(g, built.family.big_r[z]) != built.family.big_r[z]) {
                                   bad.push_back("R_" + u.label(static_cast<std::uint32_t>(z)));
                               }
                           }
                           for (auto s : hf_sets_rank_le2()) {
                               ++checked;
                               const Name x = check_name(s);
                               if (act_name(g, x) != x) {
                                   bad.push_back("check " + s.to_string());
                               }
                           }
                           Json j = unit_result(bad.empty());
                           j["names"] = checked;
                           if (!bad.empty()) {
                               j["witness"] = bad;
                           }
                           return j;
                       }});
    }
    // support facts
    for (const auto& [p, x] : built.family.r) {
        out.push_back({"hs",
                       {{"check", "min-support"}, {"name", "r" + u.pair_text(p)}},
                       [&built, p = p, x = x] {
                           const Universe& u = built.instance.universe();
                           const auto s = infer_min_support(built.instance.group(), x);
                           const auto expected = SupportSet::make(u, {p});
                           const bool hs = is_hs(built.instance.group(), x);
                           Json j = unit_result(s && *s == expected && hs);
                           j["support"] = support_text(u, s);
                           j["expected"] = expected.to_string(u);
                           j["hs"] = hs;
                           return j;
                       }});
    }
    for (std::uint32_t z = 0; z < built.family.big_r.size(); ++z) {
        out.push_back({"hs", {{"check", "min-support"}, {"name", "R_" + u.label(z)}}, [&built, z] {
                           const Universe& u = built.instance.universe();
                           const auto s = infer_min_support(built.instance.group(), built.family.big_r[z]);
                           const bool hs = is_hs(built.instance.group(), built.family.big_r[z]);
                           Json j = unit_result(s && s->empty() && hs);
                           j["support"] = support_text(u, s);
                           j["expected"] = "{}";
                           j["hs"] = hs;
                           return j;
                       }});
    }
    out.push_back({"hs", {{"check", "hs"}, {"name", "F"}}, [&built] {
                       const bool hs = is_hs(built.instance.group(), built.family.graph);
                       Json j = unit_result(hs);
                       j["hs"] = hs;
                       return j;
                   }});
    for (const auto& [q, x] : built.family.d) {
        out.push_back({"hs", {{"check", "hs"}, {"name", "D"}, {"Q", site_set_json(u, q)}}, [&built, x = x] {
                           const bool hs = is_hs(built.instance.group(), x);
                           Json j = unit_result(hs);
                           j["hs"] = hs;
                           return j;
                       }});
    }
}

inline void hs_units_staged(const InstanceSpec& spec, std::vector<CheckUnit>& out)
{
    const BuiltStagedInstance& built = *spec.staged;
    const Universe& u = built.instance.universe();
    for (std::uint32_t i = 0; i < u.site_count(); ++i) {
        out.push_back({"hs", {{"check", "stage-names"}, {"stage", u.label(i)}}, [&built, i] {
                           const Universe& u = built.instance.universe();
                           std::vector<std::string> bad;
                           for (std::uint32_t j = i; j < u.site_count(); ++j) {
                               if (!is_hs_at(built.instance, built.family.big_r[i], j)) {
                                   bad.push_back("R not in HS_" + u.label(j));
                               }
                               if (!is_hs_at(built.instance, built.family.graph_prefix[i], j)) {
                                   bad.push_back("graph prefix not in HS_" + u.label(j));
                               }
                           }
                           for (std::uint32_t a = 0; a < u.shape(i).fibers; ++a) {
                               const auto s = infer_min_support(built.instance.group_at(i), built.family.r.at({i, a}));
                               if (!s || *s != SupportSet::make(u, {{i, a}})) {
                                   bad.push_back("support of r" + u.pair_text({i, a}) + " is " + support_text(u, s));
                               }
                           }
                           if (i + 1 < u.site_count()) {
                               const auto gi = built.instance.group_at(i).generators();
                               const auto gj = built.instance.group_at(i + 1).generators();
                               for (const auto& g : gi) {
                                   if (std::find(gj.begin(), gj.end(), g) == gj.end()) {
                                       bad.push_back("generator of G_i missing from G_{i+1}");
                                       break;
                                   }
                               }
                           }
                           Json j = unit_result(bad.empty());
                           if (!bad.empty()) {
                               j["witness"] = bad;
                           }
                           return j;
                       }});
    }
}

// -- normality -----------------------------------------------------------------

inline std::vector<Name> canonical_pool(const InstanceSpec& spec)
{
    std::vector<Name> pool;
    if (spec.plain) {
        for (const auto& [p, x] : spec.plain->family.r) {
            pool.push_back(x);
        }
        pool.insert(pool.end(), spec.plain->family.big_r.begin(), spec.plain->family.big_r.end());
    } else {
        for (const auto& [p, x] : spec.staged->family.r) {
            pool.push_back(x);
        }
        pool.insert(pool.end(), spec.staged->family.big_r.begin(), spec.staged->family.big_r.end());
    }
    return pool;
}

inline void normality_units(const InstanceSpec& spec, std::size_t max_support, std::vector<CheckUnit>& out)
{
    const Universe& u = spec.universe();
    const auto group = spec.group();
    const auto perms = words_up_to(group.generators(), spec.bounds.word_length);
    for (const auto& pi : perms) {
        for (const auto& e : group.supports_up_to(max_support)) {
            out.push_back({"normality",
                           {{"check", "conjugation"}, {"pi", permutation_json(u, pi)}, {"E", support_json(u, e)}},
                           [group, pi, e] {
                               const auto v = conjugation_check(group, pi, e);
                               Json j = unit_result(v.equal);
                               j["image"] = support_json(group.universe(), v.image);
                               j["order"] = v.image_order;
                               if (v.witness) {
                                   j["witness"] = permutation_json(group.universe(), *v.witness);
                               }
                               return j;
                           }});
        }
    }
    // dc_assemble on every collection of ≤ 3 canonical names
    const auto pool = canonical_pool(spec);
    std::vector<std::vector<Name>> collections{{}};
    for (std::size_t i = 0; i < pool.size(); ++i) {
        collections.push_back({pool[i]});
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            collections.push_back({pool[i], pool[j]});
            for (std::size_t k = j + 1; k < pool.size(); ++k) {
                collections.push_back({pool[i], pool[j], pool[k]});
            }
        }
    }
    out.push_back({"normality", {{"check", "dc-assemble"}, {"collections", collections.size()}}, [group, collections] {
                       std::size_t agree = 0;
                       std::size_t union_routes = 0;
                       Json witness;
                       for (const auto& ts : collections) {
                           const auto a = dc_assemble(group, ts);
                           bool ok = a.hs == is_hs(group, a.name);
                           if (a.union_certified) {
                               ++union_routes;
                               ok = ok && is_symmetric_under(group, a.name, a.union_support);
                           }
                           if (ok) {
                               ++agree;
                           } else if (witness.is_null()) {
                               witness = {{"name", a.name.to_string()}, {"route", a.route}};
                           }
                       }
                       Json j = unit_result(agree == collections.size());
                       j["agree"] = agree;
                       j["union_certified"] = union_routes;
                       if (!witness.is_null()) {
                           j["witness"] = witness;
                       }
                       return j;
                   }});
}

// -- swap ------------------------------------------------------------------------

inline std::vector<Name> family_names(const BuiltInstance& built)
{
    std::vector<Name> all;
    for (const auto& [p, x] : built.family.r) {
        all.push_back(x);
    }
    all.insert(all.end(), built.family.big_r.begin(), built.family.big_r.end());
    for (const auto& [q, x] : built.family.d) {
        all.push_back(x);
    }
    all.push_back(built.family.graph);
    return all;
}

inline void swap_units(const InstanceSpec& spec, std::size_t max_support, std::vector<CheckUnit>& out)
{
    const BuiltInstance& built = *spec.plain;
    const Universe& u = built.instance.universe();
    const auto group = built.instance.group();
    const std::size_t max_dom = spec.bounds.swap_max_dom;
    auto conds = std::make_shared<std::vector<Condition>>(sweep_conditions(u, max_dom));
    for (const auto& e : group.supports_up_to(max_support)) {
        for (const auto& zp : u.pairs()) {
            if (e.contains(zp)) {
                continue;
            }
            Json params{{"E", support_json(u, e)}, {"z", u.label(zp.site)}, {"alpha", zp.fiber}, {"max_dom", max_dom}};
            out.push_back({"swap", params, [&built, group, e, zp, conds] {
                               std::vector<Name> supported;
                               for (auto x : family_names(built)) {
                                   if (is_symmetric_under(group, x, e)) {
                                       supported.push_back(x);
                                   }
                               }
                               std::size_t tuples = 0;
                               std::size_t admissible = 0;
                               std::size_t passed = 0;
                               Json witness;
                               for (const auto& q : *conds) {
                                   ++tuples;
                                   try {
                                       const auto r = swap_kernel(group, q, e, zp.site, zp.fiber, supported);
                                       ++admissible;
                                       if (r.pass) {
                                           ++passed;
                                       } else if (witness.is_null()) {
                                           witness = kernel_json(r);
                                       }
                                   } catch (const FiberExhausted&) {
                                   }
                               }
                               Json j = unit_result(passed == admissible);
                               j["tuples"] = tuples;
                               j["admissible"] = admissible;
                               j["passed"] = passed;
                               j["fiber_exhausted"] = tuples - admissible;
                               j["supported_names"] = supported.size();
                               if (!witness.is_null()) {
                                   j["witness"] = witness;
                               }
                               return j;
                           }});
        }
    }
}

// -- wisc ------------------------------------------------------------------------

inline void wisc_units(const InstanceSpec& spec, std::size_t max_support, std::vector<CheckUnit>& out)
{
    const BuiltStagedInstance& built = *spec.staged;
    const Universe& u = built.instance.universe();
    const std::size_t k = u.site_count();
    // stage locality: every P^{≤β}-name in the pool is fixed by every
    // transposition of a later stage
    for (std::uint32_t beta = 0; beta + 1 < k; ++beta) {
        auto pool = std::make_shared<std::vector<Name>>(stage_name_pool(built, beta, spec.bounds.pool_max_dom));
        for (std::uint32_t alpha = beta + 1; alpha < k; ++alpha) {
            for (const auto& g : built.instance.group_at(alpha).generators()) {
                if (g.moved().front().site != alpha) {
                    continue;
                }
                Json params{{"check", "stage-locality"},
                            {"beta", u.label(beta)},
                            {"pi", permutation_json(u, g)},
                            {"pool", pool->size()}};
                out.push_back({"wisc", params, [g, pool] {
                                   std::size_t fixed = 0;
                                   Json witness;
                                   for (auto y : *pool) {
                                       if (act_name(g, y) == y) {
                                           ++fixed;
                                       } else if (witness.is_null()) {
                                           witness = y.to_string();
                                       }
                                   }
                                   Json j = unit_result(fixed == pool->size());
                                   j["fixed"] = fixed;
                                   if (!witness.is_null()) {
                                       j["witness"] = witness;
                                   }
                                   return j;
                               }});
            }
        }
    }
    // the kernel: y from the canonical stage-β names, q bounded, all E, all δ
    const auto group = built.instance.group();
    auto conds = std::make_shared<std::vector<Condition>>(sweep_conditions(u, spec.bounds.wisc_max_dom));
    for (std::uint32_t beta = 0; beta + 1 < k; ++beta) {
        std::vector<Name> ys{Name{}, check_name(HFSet::ordinal(2)), built.family.big_r[beta],
                             built.family.graph_prefix[beta]};
        for (std::uint32_t a = 0; a < u.shape(beta).fibers; ++a) {
            ys.push_back(built.family.r.at({beta, a}));
        }
        for (std::uint32_t alpha = beta + 1; alpha < k; ++alpha) {
            for (const auto& e : group.supports_up_to(max_support)) {
                for (std::uint32_t delta = 0; delta < u.shape(alpha).fibers; ++delta) {
                    if (e.contains({alpha, delta})) {
                        continue;
                    }
                    Json params{{"check", "kernel"},     {"beta", u.label(beta)},     {"alpha", u.label(alpha)},
                                {"delta", delta},        {"E", support_json(u, e)}, {"names", ys.size()},
                                {"max_dom", spec.bounds.wisc_max_dom}};
                    out.push_back({"wisc", params, [&built, beta, alpha, delta, e, ys, conds] {
                                       std::size_t runs = 0;
                                       std::size_t admissible = 0;
                                       std::size_t passed = 0;
                                       Json witness;
                                       for (auto y : ys) {
                                           for (const auto& q : *conds) {
                                               ++runs;
                                               try {
                                                   auto r = wisc_kernel(built.instance, beta, y, alpha, delta, q, e);
                                                   ++admissible;
                                                   if (r.pass) {
                                                       ++passed;
                                                   } else if (witness.is_null()) {
                                                       witness = kernel_json(r);
                                                   }
                                               } catch (const FiberExhausted&) {
                                               }
                                           }
                                       }
                                       Json j = unit_result(passed == admissible);
                                       j["runs"] = runs;
                                       j["admissible"] = admissible;
                                       j["passed"] = passed;
                                       if (!witness.is_null()) {
                                           j["witness"] = witness;
                                       }
                                       return j;
                                   }});
                }
            }
        }
    }
}

// -- embedding -----------------------------------------------------------------

inline Json embedding_law(const Poset& z)
{
    const auto down = downset_embedding(z);
    std::size_t agree = 0;
    for (std::size_t a = 0; a < z.size(); ++a) {
        for (std::size_t b = 0; b < z.size(); ++b) {
            agree += (z.leq(a, b) == site_subset(down[a], down[b])) ? 1 : 0;
        }
    }
    Json j = unit_result(agree == z.size() * z.size());
    j["pairs"] = z.size() * z.size();
    j["agree"] = agree;
    return j;
}

inline void embedding_units(const InstanceSpec& spec, std::size_t random_posets, std::uint64_t seed,
                            std::vector<CheckUnit>& out)
{
    const Poset& z = spec.plain->instance.poset();
    const auto down = std::make_shared<std::vector<SiteSet>>(downset_embedding(z));
    for (std::uint32_t a = 0; a < z.size(); ++a) {
        for (std::uint32_t b = 0; b < z.size(); ++b) {
            out.push_back({"embedding", {{"z", z.label(a)}, {"z'", z.label(b)}}, [&z, down, a, b] {
                               const bool leq = z.leq(a, b);
                               const bool sub = site_subset((*down)[a], (*down)[b]);
                               Json j = unit_result(leq == sub);
                               j["leq"] = leq;
                               j["subset"] = sub;
                               return j;
                           }});
        }
    }
    const std::size_t max_size = std::max<std::size_t>(1, spec.bounds.random_poset_max);
    for (std::size_t i = 0; i < random_posets; ++i) {
        out.push_back({"embedding", {{"random_poset", i}, {"seed", seed}}, [i, seed, max_size] {
                           std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * (i + 1));
                           std::uniform_int_distribution<std::size_t> size(1, max_size);
                           const Poset p = Poset::random(size(rng), rng);
                           Json j = embedding_law(p);
                           j["elements"] = p.size();
                           j["relation_pairs"] = p.relation().size();
                           return j;
                       }});
    }
}

// -- chains --------------------------------------------------------------------

inline void chains_units(const InstanceSpec& spec, std::vector<CheckUnit>& out)
{
    const Universe& u = spec.universe();
    if (spec.plain) {
        const BuiltInstance& built = *spec.plain;
        for (const auto& [q, dq] : built.family.d) {
            for (const auto& [t, dt] : built.family.d) {
                if (!site_subset(q, t)) {
                    continue;
                }
                out.push_back({"chains",
                               {{"check", "d-monotone"}, {"Q", site_set_json(u, q)}, {"T", site_set_json(u, t)}},
                               [&u, dq = dq, dt = dt] {
                                   const auto eq = dq.entries();
                                   const auto et = dt.entries();
                                   const bool entries = std::includes(et.begin(), et.end(), eq.begin(), eq.end());
                                   std::size_t generics = 0;
                                   std::size_t holds_count = 0;
                                   for (auto g : enumerate_generics(u)) {
                                       ++generics;
                                       holds_count += interpret(dq, g).subset_of(interpret(dt, g)) ? 1 : 0;
                                   }
                                   Json j = unit_result(entries && holds_count == generics);
                                   j["entries_included"] = entries;
                                   j["generics"] = generics;
                                   j["included"] = holds_count;
                                   return j;
                               }});
            }
        }
        return;
    }
    const BuiltStagedInstance& built = *spec.staged;
    const auto chain = chain_family(built.instance);
    for (std::size_t beta = 0; beta + 1 < chain.size(); ++beta) {
        out.push_back({"chains", {{"check", "chain-step"}, {"beta", beta}}, [&u, chain, beta] {
                           const auto big = chain[beta].entries();
                           const auto small = chain[beta + 1].entries();
                           const bool strict = std::includes(big.begin(), big.end(), small.begin(), small.end()) &&
                                               small.size() < big.size();
                           std::size_t generics = 0;
                           std::size_t included = 0;
                           for (auto g : enumerate_generics(u)) {
                               ++generics;
                               included += interpret(chain[beta + 1], g).subset_of(interpret(chain[beta], g)) ? 1 : 0;
                           }
                           Json j = unit_result(strict && included == generics);
                           j["strict_entries"] = strict;
                           j["generics"] = generics;
                           j["included"] = included;
                           return j;
                       }});
    }
    // names built from P^{≤i} interpret the same under G and under G ∩ P^{≤i}
    out.push_back({"chains", {{"check", "staged-interpretation"}}, [&built, &u] {
                       std::size_t checks = 0;
                       std::size_t agree = 0;
                       for (auto g : enumerate_generics(u)) {
                           for (std::uint32_t i = 0; i < u.site_count(); ++i) {
                               const auto gi = g.restricted_to_stage(i);
                               for (auto x : {built.family.big_r[i], built.family.graph_prefix[i]}) {
                                   ++checks;
                                   agree += interpret(x, gi) == interpret(x, g) ? 1 : 0;
                               }
                           }
                       }
                       Json j = unit_result(agree == checks);
                       j["checks"] = checks;
                       j["agree"] = agree;
                       return j;
                   }});
}

// -- density -------------------------------------------------------------------

inline void density_units(const InstanceSpec& spec, std::vector<CheckUnit>& out)
{
    const BuiltInstance& built = *spec.plain;
    const Universe& u = built.instance.universe();
    for (std::uint32_t z = 0; z < u.site_count(); ++z) {
        out.push_back({"density", {{"site", u.label(z)}}, [&built, z] {
                           const Universe& u = built.instance.universe();
                           const auto rep = min_onto_check(built.instance, z);
                           // the saturation boundary, enumerated on its own
                           std::set<std::pair<std::string, std::uint32_t>> boundary;
                           const std::uint32_t v = built.instance.value_bound();
                           const std::size_t budget = u.domain_cutoff() >= v ? u.domain_cutoff() - v : 0;
                           for_each_condition(u, budget, [&](const Condition& p) {
                               std::set<std::uint32_t> used;
                               for (const auto& a : p.entries()) {
                                   if (a.cell.site == z) {
                                       used.insert(a.cell.fiber);
                                   }
                               }
                               if (used.size() == u.shape(z).fibers) {
                                   for (std::uint32_t g = 0; g < v; ++g) {
                                       boundary.insert({p.to_string(), g});
                                   }
                               }
                           });
                           std::set<std::pair<std::string, std::uint32_t>> failures;
                           for (const auto& [p, g] : rep.failures) {
                               failures.insert({p.to_string(), g});
                           }
                           Json j = unit_result(rep.clean() && failures == boundary);
                           j["checked"] = rep.checked;
                           j["witnessed"] = rep.witnessed;
                           j["failures"] = rep.failures.size();
                           j["boundary"] = boundary.size();
                           j["defects"] = rep.defects.size();
                           j["empty_min_sentinel"] = v;
                           return j;
                       }});
    }
}

inline std::vector<std::string> applicable_suites(const InstanceSpec& spec)
{
    if (spec.staged) {
        return {"hs", "normality", "wisc", "chains"};
    }
    std::vector<std::string> out;
    if (spec.universe().cell_count() <= RecursiveOracle::cell_limit) {
        out.push_back("forcing-oracle");
    }
    if (spec.universe().cell_count() <= SemanticOracle::table_cell_limit) {
        out.push_back("symmetry-lemma");
    }
    for (const char* s : {"hs", "normality", "swap", "embedding", "chains", "density"}) {
        out.push_back(s);
    }
    return out;
}

} // namespace detail

/// Expands a suite request into check units, in deterministic order. A
/// suite that does not apply to the instance yields one failing unit.
inline std::vector<CheckUnit> plan_checks(const InstanceSpec& spec, const std::string& suite,
                                          const RunOptions& opts = {})
{
    std::vector<std::string> suites;
    if (suite == "all") {
        suites = detail::applicable_suites(spec);
        if (!spec.checks.empty() && std::find(spec.checks.begin(), spec.checks.end(), "all") == spec.checks.end()) {
            std::erase_if(suites, [&](const std::string& s) {
                return std::find(spec.checks.begin(), spec.checks.end(), s) == spec.checks.end();
            });
        }
    } else {
        suites = {suite};
    }
    const std::size_t max_dom = opts.max_dom.value_or(spec.bounds.max_dom);
    const std::size_t max_support = opts.max_support.value_or(spec.max_support());
    const std::uint64_t seed = opts.seed.value_or(spec.bounds.seed);
    const std::size_t random_posets = opts.random_posets.value_or(spec.bounds.random_posets);

    std::vector<CheckUnit> units;
    for (const auto& s : suites) {
        auto unsupported = [&](const std::string& why) {
            units.push_back({s, {{"error", why}}, [] { return detail::unit_result(false); }});
        };
        if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end()) {
            unsupported("unknown suite");
            continue;
        }
        const bool staged_only = s == "wisc";
        const bool plain_only = s == "forcing-oracle" || s == "symmetry-lemma" || s == "swap" || s == "embedding" ||
                                s == "density";
        if (staged_only && !spec.staged) {
            unsupported("suite requires a staged spec");
            continue;
        }
        if (plain_only && !spec.plain) {
            unsupported("suite requires a poset spec");
            continue;
        }
        try {
            if (s == "forcing-oracle") {
                if (spec.universe().cell_count() > RecursiveOracle::cell_limit) {
                    unsupported("recursive forcing needs at most " + std::to_string(RecursiveOracle::cell_limit) +
                                " cells");
                    continue;
                }
                detail::forcing_oracle_units(spec, max_dom, units);
            } else if (s == "symmetry-lemma") {
                detail::symmetry_lemma_units(spec, max_dom, units);
            } else if (s == "hs") {
                spec.plain ? detail::hs_units_plain(spec, units) : detail::hs_units_staged(spec, units);
            } else if (s == "normality") {
                detail::normality_units(spec, max_support, units);
            } else if (s == "swap") {
                detail::swap_units(spec, max_support, units);
            } else if (s == "wisc") {
                detail::wisc_units(spec, max_support, units);
            } else if (s == "embedding") {
                detail::embedding_units(spec, random_posets, seed, units);
            } else if (s == "chains") {
                detail::chains_units(spec, units);
            } else if (s == "density") {
                detail::density_units(spec, units);
            }
        } catch (const Error& e) {
            unsupported(e.what());
        }
        if (s == "embedding" && random_posets > 0) {
            for (auto& u : units) {
                if (u.suite == "embedding") {
                    u.params["seed"] = seed;
                }
            }
        }
    }
    return units;
}

/// Runs the units (in parallel when jobs > 1) and emits one JSON object per
/// unit, in plan order. Returns true iff every verdict passes.
inline bool run_checks(const InstanceSpec& spec, const std::string& suite, const RunOptions& opts,
                       const std::function<void(const Json&)>& emit)
{
    auto units = plan_checks(spec, suite, opts);
    std::vector<Json> results(units.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < units.size(); i = next++) {
            const auto start = std::chrono::steady_clock::now();
            Json body;
            try {
                body = units[i].run();
            } catch (const std::exception& e) {
                body = detail::unit_result(false);
                body["error"] = e.what();
            }
            const auto ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            Json line;
            line["suite"] = units[i].suite;
            line["instance"] = spec.hash;
            line["params"] = units[i].params;
            for (auto it = body.begin(); it != body.end(); ++it) {
                line[it.key()] = it.value();
            }
            line["elapsed_ms"] = std::round(ms * 1000.0) / 1000.0;
            results[i] = std::move(line);
        }
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min(opts.jobs, units.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    bool all_pass = true;
    for (const auto& r : results) {
        all_pass = all_pass && r.at("verdict") == "pass";
        emit(r);
    }
    return all_pass;
}

} // namespace symext

#endif // SYMEXT_CHECKS_HPP
