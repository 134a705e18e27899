#pragma once

/**
 * @file cli.hpp
 * @brief The `wittlab` command-line driver.
 *
 * Exit codes: 0 success, 1 parse or usage error, 2 a check failed, 3 only partial verdicts.
 */

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wittlab/brauer.hpp"
#include "wittlab/errors.hpp"
#include "wittlab/expression.hpp"
#include "wittlab/field_tower.hpp"
#include "wittlab/quadform.hpp"
#include "wittlab/verification.hpp"
#include "wittlab/witness_search.hpp"
#include "wittlab/witt_ideal.hpp"

namespace wittlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFail = 2;
inline constexpr int kExitPartial = 3;

struct Options {
    std::string field;
    std::string expression;
    std::string check;
    bool json = false;
    bool timing = false;
    bool witness = false;
    std::uint64_t seed = 1;
    std::uint64_t budget = 0;  // 0: default_budget()
    std::uint64_t samples = 100;
    std::optional<unsigned> n;
    unsigned depth = 4;
};

/// Query verbs that take a single expression.
inline const std::vector<std::string>& query_verbs() {
    static const std::vector<std::string> verbs{"eval", "aniso", "iw", "hyp", "sig", "torsion", "index", "division", "trace", "norm"};
    return verbs;
}

namespace detail {

inline QuadForm need_form(const Expression& e, const std::string& verb) {
    if (const auto* f = std::get_if<QuadForm>(&e)) return *f;
    throw InvalidArgument("'" + verb + "' expects a quadratic form");
}

inline BrauerClass need_algebra(const Expression& e, const std::string& verb) {
    if (const auto* a = std::get_if<BrauerClass>(&e)) return *a;
    throw InvalidArgument("'" + verb + "' expects an algebra (a,b)(x)...");
}

/// Evaluates one query verb; returns the text line and the JSON result value.
inline std::pair<std::string, nlohmann::ordered_json> evaluate(const std::string& verb, const FieldTower& field,
                                                               const Expression& e, const Options& opts) {
    using nlohmann::ordered_json;
    if (verb == "eval") {
        return {render(e), render(e)};
    }
    if (verb == "aniso") {
        const QuadForm phi = need_form(e, verb);
        const std::size_t iw = witt_index(phi);
        std::string text = std::string(iw == 0 ? "anisotropic" : "isotropic") + ", dim " + std::to_string(phi.dim()) +
                           ", witt_index " + std::to_string(iw);
        ordered_json j{{"anisotropic", iw == 0}, {"dim", phi.dim()}, {"witt_index", iw}};
        if (opts.witness) {
            const auto w = isotropy_witness_search(phi, WitnessSearchOptions{opts.depth, 10000, opts.seed});
            const std::string shown = w ? render(field, *w) : "none found";
            text += ", witness " + shown;
            j["witness"] = w ? ordered_json(shown) : ordered_json(nullptr);
        }
        return {text, j};
    }
    if (verb == "iw") {
        const WittDecomposition d = witt_decompose(need_form(e, verb));
        return {"witt_index " + std::to_string(d.witt_index) + ", anisotropic part " + render(d.anisotropic_part),
                ordered_json{{"witt_index", d.witt_index}, {"anisotropic_part", render(d.anisotropic_part)}}};
    }
    if (verb == "hyp") {
        const bool h = is_hyperbolic(need_form(e, verb));
        return {h ? "hyperbolic" : "not hyperbolic", h};
    }
    if (verb == "sig") {
        const QuadForm phi = need_form(e, verb);
        std::string text;
        ordered_json j = ordered_json::object();
        for (const auto& [ordering, value] : total_signature(phi)) {
            if (!text.empty()) text += "\n";
            const std::string key = render_ordering(field, ordering);
            text += key + ": " + std::to_string(value);
            j[key] = value;
        }
        return {text, j};
    }
    if (verb == "torsion") {
        const bool t = is_torsion(need_form(e, verb));
        return {t ? "torsion" : "not torsion", t};
    }
    if (verb == "index") {
        const std::uint64_t ind = index(need_algebra(e, verb));
        return {std::to_string(ind), ind};
    }
    if (verb == "division") {
        const BrauerClass alpha = need_algebra(e, verb);
        const auto symbols = alpha.as_symbols();
        const bool d = is_division_tensor(field, symbols);
        return {d ? "division" : "not division", d};
    }
    if (verb == "trace") {
        const auto symbols = need_algebra(e, verb).as_symbols();
        const std::string t = render(trace_form_tensor(field, symbols));
        return {t, t};
    }
    if (verb == "norm") {
        const BrauerClass alpha = need_algebra(e, verb);
        if (alpha.symbols().size() != 1) throw InvalidArgument("'norm' takes a single quaternion symbol");
        const auto symbols = alpha.as_symbols();
        const std::string n = render(norm_form(symbols.front()));
        return {n, n};
    }
    throw InvalidArgument("unknown verb '" + verb + "'");
}

inline std::vector<CheckReport> run_suite(const Options& opts) {
    const std::uint64_t budget = opts.budget != 0 ? opts.budget : default_budget();
    const std::string& check = opts.check;
    auto field = [&]() {
        if (opts.field.empty()) throw InvalidArgument("suite '" + check + "' needs -f/--field");
        return parse_field(opts.field);
    };
    auto lambda_default = [](const FieldTower& f) -> unsigned {
        if (f.base().kind() == BaseKind::QuadClosed && f.depth() <= 6) return lambda_prime_exhaustive(f);
        if (auto l = lambda_prime_documented(f)) return *l;
        throw InvalidArgument("cannot determine lambda'(F); pass --n");
    };

    if (check == "trace") return {check_trace_identities(field(), opts.samples, opts.seed)};
    if (check == "so2s") return {check_prop_so2s(field(), opts.n.value_or(1), opts.samples, opts.seed)};
    if (check == "thm1") {
        const FieldTower f = field();
        return {check_thm1_instance(f, opts.n ? *opts.n : lambda_default(f), budget)};
    }
    if (check == "propL") return {check_prop_L(field(), opts.n.value_or(1), opts.samples, opts.seed, budget)};
    if (check == "thm2") {
        const FieldTower f = field();
        return {check_thm2_instance(f, opts.n ? *opts.n : lambda_default(f), opts.samples, opts.seed, budget)};
    }
    if (check == "corollary") {
        const FieldTower f = field();
        return {check_corollary_st(f, opts.n ? *opts.n : lambda_default(f), opts.samples, opts.seed, budget)};
    }
    if (check == "optimality") return {check_optimality_examples(opts.n.value_or(2), budget)};
    if (check == "all") {
        const FieldTower r0 = parse_field("R");
        const FieldTower c2 = parse_field("C((t1))((t2))");
        const FieldTower f3 = parse_field("F3((t))");
        const FieldTower c3 = parse_field("C((t1))((t2))((t3))");
        const FieldTower r3 = parse_field("R((t1))((t2))((t3))");
        return {
            check_trace_identities(r0, opts.samples, opts.seed),
            check_trace_identities(c2, opts.samples, opts.seed),
            check_trace_identities(f3, opts.samples, opts.seed),
            check_prop_so2s(c3, 1, opts.samples, opts.seed),
            check_prop_so2s(r3, 1, opts.samples, opts.seed),
            check_thm1_instance(c3, 1, budget),
            check_prop_L(r3, 1, opts.samples, opts.seed, budget),
            check_thm2_instance(r3, 2, std::min<std::uint64_t>(opts.samples, 50), opts.seed, budget),
            check_optimality_examples(2, budget),
            check_corollary_st(r3, 2, std::min<std::uint64_t>(opts.samples, 25), opts.seed, budget),
        };
    }
    throw InvalidArgument("unknown check '" + check + "' (trace, so2s, thm1, propL, thm2, optimality, corollary, all)");
}

inline void print_report(std::ostream& out, const CheckReport& r, bool timing) {
    out << r.check_id << " " << r.field_spec << ": " << to_string(r.verdict()) << " (" << r.passed << "/" << r.run
        << " passed, " << r.skipped << " skipped";
    if (timing) out << ", " << r.elapsed.count() << " ms";
    out << ")\n";
    for (const auto& w : r.witnesses) out << "  witness: " << w << "\n";
    for (const auto& n : r.notes) out << "  note: " << n << "\n";
}

inline int repl(std::istream& in, std::ostream& out, std::ostream& err, const std::string& initial_field, const Options& opts) {
    std::optional<FieldTower> field;
    Bindings bindings;
    if (!initial_field.empty()) field = parse_field(initial_field);
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        line = line.substr(first);
        try {
            if (line == ":quit" || line == ":q") break;
            if (line.rfind(":field", 0) == 0) {
                field = parse_field(line.substr(6));
                bindings.clear();
                out << "field " << field->spec() << "\n";
                continue;
            }
            if (!field) throw InvalidArgument("no field set; use :field <spec>");
            if (line.rfind(":let", 0) == 0) {
                const std::string rest = line.substr(4);
                const auto eq = rest.find('=');
                if (eq == std::string::npos) throw InvalidArgument(":let name = <expression>");
                std::string name = rest.substr(0, eq);
                name.erase(0, name.find_first_not_of(" \t"));
                name.erase(name.find_last_not_of(" \t") + 1);
                if (!FieldTower::is_identifier(name)) throw InvalidArgument("bad binding name '" + name + "'");
                Expression value = parse_expression(*field, rest.substr(eq + 1), &bindings);
                out << name << " = " << render(value) << "\n";
                bindings.insert_or_assign(name, std::move(value));
                continue;
            }
            std::string verb = "eval";
            std::string expr = line;
            const auto space = line.find_first_of(" \t");
            const std::string head = line.substr(0, space);
            if (std::find(query_verbs().begin(), query_verbs().end(), head) != query_verbs().end()) {
                verb = head;
                expr = space == std::string::npos ? "" : line.substr(space + 1);
            }
            out << evaluate(verb, *field, parse_expression(*field, expr, &bindings), opts).first << "\n";
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
        }
    }
    return kExitOk;
}

}  // namespace detail

/// Runs the CLI on `args` (without the program name).
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"wittlab: quadratic forms and 2-torsion Brauer classes over iterated Laurent series fields"};
    app.require_subcommand(1);
    Options opts;

    auto add_common = [&opts](CLI::App* sub) {
        sub->add_option("-f,--field", opts.field, "field spec, e.g. \"R((t1))((t2))\"");
        sub->add_flag("--json", opts.json, "emit JSON");
        sub->add_option("--seed", opts.seed, "random seed");
        sub->add_option("--budget", opts.budget, "search budget (default 2^20 or $WITTLAB_BUDGET)");
        sub->add_option("--samples", opts.samples, "sample count");
        sub->add_option("--n", opts.n, "theorem parameter n");
        sub->add_option("--depth", opts.depth, "truncation depth for isotropy witness search");
    };

    std::vector<CLI::App*> queries;
    for (const auto& verb : query_verbs()) {
        CLI::App* sub = app.add_subcommand(verb, "query: " + verb);
        add_common(sub);
        sub->add_option("expression", opts.expression, "form or algebra expression")->required();
        if (verb == "aniso") sub->add_flag("--witness", opts.witness, "also search for an explicit isotropic vector");
        queries.push_back(sub);
    }
    CLI::App* suite = app.add_subcommand("suite", "run verification checks");
    add_common(suite);
    suite->add_option("check", opts.check, "trace | so2s | thm1 | propL | thm2 | optimality | corollary | all")->required();
    suite->add_flag("--timing", opts.timing, "include wall-clock time");
    CLI::App* repl = app.add_subcommand("repl", "interactive loop (:field <spec>, :let x = <expr>, :quit)");
    add_common(repl);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (suite->parsed()) {
            const std::vector<CheckReport> reports = detail::run_suite(opts);
            if (opts.json) {
                if (reports.size() == 1) {
                    out << to_json(reports.front(), opts.timing).dump(2) << "\n";
                } else {
                    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
                    for (const auto& r : reports) arr.push_back(to_json(r, opts.timing));
                    out << arr.dump(2) << "\n";
                }
            } else {
                for (const auto& r : reports) detail::print_report(out, r, opts.timing);
            }
            return suite_exit_code(reports);
        }
        if (repl->parsed()) return detail::repl(in, out, err, opts.field, opts);

        for (CLI::App* sub : queries) {
            if (!sub->parsed()) continue;
            const std::string verb = sub->get_name();
            if (opts.field.empty()) throw InvalidArgument("missing -f/--field");
            const FieldTower field = parse_field(opts.field);
            const Expression e = parse_expression(field, opts.expression);
            auto [text, value] = detail::evaluate(verb, field, e, opts);
            if (opts.json) {
                nlohmann::ordered_json j{{"verb", verb}, {"field", field.spec()}, {"input", opts.expression}, {"result", value}};
                out << j.dump(2) << "\n";
            } else {
                out << text << "\n";
            }
            return kExitOk;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace wittlab::cli
