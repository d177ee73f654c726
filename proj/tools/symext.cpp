// symext: batch checks over an instance spec, one JSON line per check unit.
//
//   symext --spec specs/reference.json --suite all --jobs 4
//   symext --spec specs/reference.json --formula "(mem '0 r:a:0)" --condition "[a:0:0=1]"

#include <symext/checks.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int evaluate_formula(const symext::InstanceSpec& spec, const std::string& formula_text,
                     const std::string& condition_text)
{
    using namespace symext;
    if (!spec.plain) {
        throw Error("--formula needs a poset spec");
    }
    const Universe& u = spec.universe();
    const Formula f = parse_formula(formula_text, &u, family_resolver(*spec.plain));
    Condition p;
    if (!condition_text.empty()) {
        detail::TextCursor cur(condition_text);
        p = detail::parse_condition(cur, &u);
    }
    Json line;
    line["formula"] = f.to_string();
    line["condition"] = p.to_string();
    line["semantic"] = forces(u, p, f, ForcingMode::semantic);
    if (u.cell_count() <= RecursiveOracle::cell_limit) {
        line["recursive"] = forces(u, p, f, ForcingMode::recursive);
    }
    std::cout << line.dump() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite checks for symmetric-extension proof kernels"};
    std::string spec_path;
    std::string suite = "all";
    symext::RunOptions opts;
    std::size_t max_dom = 0;
    std::size_t max_support = 0;
    std::uint64_t seed = 0;
    std::size_t random_posets = 0;
    std::string formula;
    std::string condition;
    bool list = false;

    app.add_option("--spec", spec_path, "instance spec (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--suite", suite, "check suite")
        ->check(CLI::IsMember({"all", "forcing-oracle", "symmetry-lemma", "hs", "normality", "swap", "wisc",
                               "embedding", "chains", "density"}));
    auto* o_dom = app.add_option("--max-dom", max_dom, "largest condition domain swept by forcing suites");
    auto* o_sup = app.add_option("--max-support", max_support, "largest support E enumerated");
    app.add_option("--jobs", opts.jobs, "worker threads")->check(CLI::PositiveNumber);
    auto* o_seed = app.add_option("--seed", seed, "seed for sampled suites");
    auto* o_rand = app.add_option("--random-posets", random_posets, "sampled posets for the embedding suite");
    app.add_option("--formula", formula, "evaluate one formula instead of running suites");
    app.add_option("--condition", condition, "condition for --formula, e.g. [a:0:0=1]");
    app.add_flag("--list", list, "print the planned check units without running them");
    CLI11_PARSE(app, argc, argv);

    if (*o_dom) {
        opts.max_dom = max_dom;
    }
    if (*o_sup) {
        opts.max_support = max_support;
    }
    if (*o_seed) {
        opts.seed = seed;
    }
    if (*o_rand) {
        opts.random_posets = random_posets;
    }

    try {
        const auto spec = symext::parse_instance_spec(read_file(spec_path));
        if (!formula.empty()) {
            return evaluate_formula(spec, formula, condition);
        }
        if (list) {
            for (const auto& u : symext::plan_checks(spec, suite, opts)) {
                std::cout << symext::Json{{"suite", u.suite}, {"params", u.params}}.dump() << '\n';
            }
            return 0;
        }
        const bool ok = symext::run_checks(spec, suite, opts, [](const symext::Json& line) {
            std::cout << line.dump() << '\n';
        });
        std::cout.flush();
        return ok ? 0 : 1;
    } catch (const symext::ParseError& e) {
        std::cerr << spec_path << ":" << e.line() << ":" << e.column() << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
