#include "postlr/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "postlr/braiding.hpp"
#include "postlr/errors.hpp"
#include "postlr/integrators.hpp"
#include "postlr/series.hpp"
#include "postlr/suites.hpp"

namespace postlr::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 7;

// Every option any leaf subcommand can take. Unset values fall back to per-command defaults.
struct Options {
    std::optional<int> max_grade;
    int order = 3;
    std::uint64_t seed = kDefaultSeed;
    std::optional<int> samples;
    std::string group = "so3";
    std::string field = "divfree";
    double t_min = 1e-3;
    double t_max = 1e-1;
    int t_points = 8;
    std::string out;
    std::string derivatives = "analytic";
    int threads = 1;
    std::string suite;
    std::string method;
    std::string kind = "forests";
    std::string op;
    std::string x = "o";
    std::string y;
    std::string f;
    std::string derivations = "free";
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Flat key=value lines; '#' starts a comment line. Keys are long option names, '_' or '-'.
std::vector<std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::vector<std::string> flags;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || trim(line.substr(0, eq)).empty()) {
            throw ConfigError(path + ":" + std::to_string(number) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        std::replace(key.begin(), key.end(), '_', '-');
        if (key == "config") throw ConfigError(path + ":" + std::to_string(number) + ": nested config");
        flags.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
    }
    return flags;
}

// Splices config-file flags after the subcommand words and before the user's flags, so that the
// last value wins and flags override the file.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a path");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (!path) return rest;
    std::size_t words = 0;
    while (words < rest.size() && words < 2 && !rest[words].empty() && rest[words][0] != '-') ++words;
    std::vector<std::string> out(rest.begin(), rest.begin() + static_cast<long>(words));
    for (auto& flag : read_config(*path)) out.push_back(std::move(flag));
    out.insert(out.end(), rest.begin() + static_cast<long>(words), rest.end());
    return out;
}

std::string header(const std::string& command, const std::vector<std::pair<std::string, std::string>>& fields,
                   std::uint64_t seed) {
    std::string out = "# " + command;
    for (const auto& [k, v] : fields) out += " " + k + "=" + v;
    return out + " seed=" + std::to_string(seed) + "\n";
}

DerivativeMode derivative_mode(const std::string& s) {
    if (s == "analytic") return DerivativeMode::Analytic;
    if (s == "fd") return DerivativeMode::FiniteDifference;
    throw ConfigError("--derivatives must be analytic or fd");
}

DerivationMode derivation_mode(const std::string& s) {
    if (s == "free") return DerivationMode::Free;
    if (s == "zero") return DerivationMode::Zero;
    throw ConfigError("--derivations must be free or zero");
}

int trees_enumerate(const Options& o, std::ostream& out) {
    const int max_grade = o.max_grade.value_or(3);
    if (max_grade < 0) throw ConfigError("--max-grade must be nonnegative");
    std::vector<std::string> lines;
    if (o.kind == "forests") {
        for (const auto& f : enumerate_forests(max_grade)) lines.push_back(format(f));
    } else if (o.kind == "trees") {
        for (int n = 1; n <= max_grade; ++n) {
            for (const auto& t : enumerate_trees(n)) lines.push_back(format(t));
        }
    } else {
        throw ConfigError("--kind must be forests or trees");
    }
    out << header("trees enumerate", {{"kind", o.kind}, {"max_grade", std::to_string(max_grade)}, {"count", std::to_string(lines.size())}}, o.seed);
    for (const auto& l : lines) out << l << "\n";
    return kOk;
}

int algebra_eval(const Options& o, std::ostream& out) {
    const PostHopfAlgebroid h(derivation_mode(o.derivations));
    const AlgebroidElement x = AlgebroidElement::parse(o.x);
    auto y = [&]() {
        if (o.y.empty()) throw ConfigError("--op " + o.op + " needs --y");
        return AlgebroidElement::parse(o.y);
    };
    std::string result;
    if (o.op == "triangle") {
        result = dump(h.triangle(x, y()));
    } else if (o.op == "gl") {
        result = dump(h.gl_product(x, y()));
    } else if (o.op == "concat") {
        result = dump(concat_mul(x, y()));
    } else if (o.op == "theta") {
        result = dump(h.theta(x));
    } else if (o.op == "gl-antipode") {
        result = dump(h.gl_antipode(x));
    } else if (o.op == "antipode") {
        result = dump(antipode_concat(x));
    } else if (o.op == "coproduct") {
        result = format_inline(coproduct(x)) + "\n";
    } else if (o.op == "act") {
        if (o.f.empty()) throw ConfigError("--op act needs --f");
        result = format(h.module_action(x, parse_poly(o.f))) + "\n";
    } else if (o.op == "braid") {
        const Braiding b(h);
        result = format_inline(b.r(b.box(x, y()))) + "\n";
    } else {
        throw ConfigError("unknown --op: " + o.op);
    }
    out << header("algebra eval", {{"op", o.op}, {"derivations", o.derivations}}, o.seed);
    out << (result.empty() ? "0\n" : result);
    return kOk;
}

int algebra_check(const Options& o, std::ostream& out) {
    const auto suite = parse_suite(o.suite);
    if (!suite) throw ConfigError("unknown suite: " + o.suite);
    SuiteConfig config = default_config(*suite);
    if (o.max_grade) config.max_grade = *o.max_grade;
    if (o.samples) config.samples = *o.samples;
    if (config.max_grade < 0 || config.samples < 0) throw ConfigError("--max-grade and --samples must be nonnegative");
    config.seed = o.seed;
    config.threads = o.threads;
    out << header("algebra check",
                  {{"suite", o.suite}, {"max_grade", std::to_string(config.max_grade)}, {"samples", std::to_string(config.samples)}},
                  o.seed);
    int failed = 0;
    for (const auto& r : run_suite(*suite, config)) {
        out << format(r) << "\n";
        failed += r.passed() ? 0 : 1;
    }
    out << "# result=" << (failed ? "fail" : "pass") << " failed=" << failed << "\n";
    return failed ? kSuiteFailed : kOk;
}

int series_command(const std::string& which, const Options& o, std::ostream& out) {
    if (o.order < 0 || o.order > 6) throw ConfigError("--order must lie in 0..6");
    const PostHopfAlgebroid h;
    TruncatedSeries s(o.order);
    std::vector<std::pair<std::string, std::string>> fields = {{"order", std::to_string(o.order)}};
    if (which == "gl-exp") {
        s = exp_gl(h, TruncatedSeries::from_element(AlgebroidElement::parse(o.x), o.order), o.order);
        fields.emplace_back("x", format_inline(AlgebroidElement::parse(o.x)));
    } else {
        const std::string method = o.method.empty() ? "lie-euler" : o.method;
        Method m;
        if (method == "lie-euler") {
            m = Method::LieEuler;
        } else if (method == "aromatic") {
            m = Method::Aromatic;
        } else {
            throw ConfigError("--method must be lie-euler or aromatic");
        }
        s = modified_field(h, m, o.order);
        fields.emplace_back("method", method);
    }
    out << header("series " + which, fields, o.seed) << dump(s);
    return kOk;
}

int experiment_command(const std::string& which, const Options& o, std::ostream& out) {
    const ExperimentKind kind = which == "volume" ? ExperimentKind::Volume : ExperimentKind::Order;
    ExperimentConfig c;
    c.group = o.group;
    c.field = o.field;
    c.method = o.method.empty() ? (kind == ExperimentKind::Volume ? "aromatic" : "lie-euler") : o.method;
    c.t_min = o.t_min;
    c.t_max = o.t_max;
    c.t_points = o.t_points;
    c.seed = o.seed;
    c.derivatives = derivative_mode(o.derivatives);
    c.order = o.order;
    c.threads = o.threads;
    const std::string csv = format_csv(run_experiment(kind, c));
    if (o.out.empty()) {
        out << csv;
        return kOk;
    }
    std::ofstream file(o.out, std::ios::binary);
    if (!(file << csv)) throw ConfigError("cannot write " + o.out);
    out << header("experiment " + which, {{"method", c.method}, {"out", o.out}}, o.seed);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Post-Lie–Rinehart algebra toolkit: trees, algebroid identities, flow series and Lie-group experiments"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.add_option("--config", "key=value file with option defaults; flags override it");

    auto seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "random seed, echoed in the output header"); };
    auto threads = [&](CLI::App* c) { c->add_option("--threads", o.threads, "worker threads; output does not depend on it")->check(CLI::PositiveNumber); };

    std::function<int()> action;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, std::function<int()> fn) {
        CLI::App* c = parent->add_subcommand(name, help);
        c->callback([&action, fn]() { action = fn; });
        seed(c);
        return c;
    };

    CLI::App* trees = app.add_subcommand("trees", "planar rooted trees")->require_subcommand(1);
    CLI::App* te = leaf(trees, "enumerate", "list forests (or trees) up to a grade", [&] { return trees_enumerate(o, out); });
    te->add_option("--max-grade", o.max_grade, "largest grade (default 3)");
    te->add_option("--kind", o.kind, "forests|trees");

    CLI::App* algebra = app.add_subcommand("algebra", "the action post-Hopf algebroid")->require_subcommand(1);
    CLI::App* ae = leaf(algebra, "eval", "evaluate one operation", [&] { return algebra_eval(o, out); });
    ae->add_option("--op", o.op, "triangle|gl|concat|theta|gl-antipode|antipode|coproduct|act|braid")->required();
    ae->add_option("--x", o.x, "first element, e.g. \"o; 2 | [o]\"");
    ae->add_option("--y", o.y, "second element");
    ae->add_option("--f", o.f, "coefficient polynomial for --op act");
    ae->add_option("--derivations", o.derivations, "free|zero");
    CLI::App* ac = leaf(algebra, "check", "run an identity suite", [&] { return algebra_check(o, out); });
    ac->add_option("--suite", o.suite, "axioms|gl|theta|smash|degenerate|braiding")->required();
    ac->add_option("--max-grade", o.max_grade, "exhaustive grade bound");
    ac->add_option("--samples", o.samples, "random cases");
    threads(ac);

    CLI::App* series = app.add_subcommand("series", "truncated flow series")->require_subcommand(1);
    CLI::App* sg = leaf(series, "gl-exp", "Grossman–Larson exponential of t x", [&] { return series_command("gl-exp", o, out); });
    sg->add_option("--order", o.order, "truncation order");
    sg->add_option("--x", o.x, "exponent (default o)");
    CLI::App* sm = leaf(series, "modified-field", "modified field of a Lie–Euler method", [&] { return series_command("modified-field", o, out); });
    sm->add_option("--order", o.order, "truncation order");
    sm->add_option("--method", o.method, "lie-euler|aromatic");

    CLI::App* experiment = app.add_subcommand("experiment", "numeric experiments on SO(3)")->require_subcommand(1);
    for (const std::string which : {"volume", "order"}) {
        CLI::App* e = leaf(experiment, which, which == "volume" ? "log det of one step against t" : "errors against t",
                           [&, which] { return experiment_command(which, o, out); });
        e->add_option("--method", o.method, which == "volume" ? "lie-euler|aromatic|reference" : "lie-euler|aromatic|gl-exp|concat-exp");
        e->add_option("--group", o.group, "so3");
        e->add_option("--field", o.field, "divfree|generic|constant");
        e->add_option("--t-min", o.t_min, "smallest t");
        e->add_option("--t-max", o.t_max, "largest t");
        e->add_option("--t-points", o.t_points, "grid size (>= 5)");
        e->add_option("--order", o.order, "series truncation for gl-exp and concat-exp");
        e->add_option("--derivatives", o.derivatives, "analytic|fd");
        e->add_option("--out", o.out, "CSV path (default stdout)");
        threads(e);
    }

    try {
        std::vector<std::string> expanded = expand_config(args);
        std::reverse(expanded.begin(), expanded.end());
        app.parse(std::move(expanded));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        return action();
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << "\n";
    } catch (const ParseError& e) {
        err << "usage error: " << e.what() << "\n";
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << "\n";
    } catch (const CapacityError& e) {
        err << "usage error: " << e.what() << "\n";
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kSuiteFailed;
    }
    return kUsage;
}

}  // namespace postlr::cli
