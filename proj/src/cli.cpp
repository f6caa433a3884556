#include "treeforms/cli.hpp"

#include "treeforms/errors.hpp"
#include "treeforms/lattice.hpp"
#include "treeforms/quadratic.hpp"
#include "treeforms/selftest.hpp"
#include "treeforms/suites.hpp"
#include "treeforms/tree_groups.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace treeforms {

std::vector<long long> parse_int_list(const std::string& text, const std::string& flag, std::size_t length) {
    std::vector<long long> head, tail;
    bool ellipsis = false;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
        item = b == std::string::npos ? "" : item.substr(b, e - b + 1);
        if (item == "...") {
            if (ellipsis || head.empty()) throw InvalidInput(flag + ": misplaced '...'");
            ellipsis = true;
            continue;
        }
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (item.empty() || used != item.size()) throw InvalidInput(flag + ": '" + item + "' is not an integer");
        (ellipsis ? tail : head).push_back(v);
    }
    if (ellipsis) {
        if (length == 0) throw InvalidInput(flag + ": '...' needs a known length");
        if (head.size() + tail.size() > length) throw InvalidInput(flag + ": too many entries");
        while (head.size() + tail.size() < length) head.push_back(head.back());
    }
    head.insert(head.end(), tail.begin(), tail.end());
    if (length && head.size() != length)
        throw InvalidInput(flag + ": expected " + std::to_string(length) + " entries, got " + std::to_string(head.size()));
    return head;
}

namespace {

struct Config {
    std::string format = "table";
    std::size_t max_generators = kDefaultTreeCap;
    std::size_t max_dimension = MatrixLimits{}.max_cols;

    // groups / verify
    std::string kind;
    std::size_t order = 0;
    Label labels = 0;
    std::string check;
    std::size_t samples = 100;
    std::uint64_t seed = 1;

    // form
    std::string action;
    std::string named;
    std::string input;
    std::string c;
    int tau_m = 0;
    std::size_t dim = 0;
    std::string q;
    std::string mu;
    std::string variant = "symmetric";

    // selftest
    std::size_t jobs = 1;
    double budget = 0;

    bool json() const { return format == "json"; }
    TreeGroupLimits limits() const {
        TreeGroupLimits l;
        l.max_generators = max_generators;
        l.matrix.max_cols = max_dimension;
        return l;
    }
};

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("--input: cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput("--input: " + path + ": malformed JSON at byte " + std::to_string(e.byte));
    }
}

std::string join(const std::vector<Integer>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i].str();
    return "[" + s + "]";
}

std::vector<int> to_ints(const std::vector<long long>& xs) { return std::vector<int>(xs.begin(), xs.end()); }

Z2Matrix z2_matrix_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array()) throw InvalidInput(where + ": expected an array of rows");
    Z2Matrix m;
    for (std::size_t i = 0; i < j.size(); ++i) {
        auto row = vector_from_json(j[i], where + "[" + std::to_string(i) + "]");
        m.emplace_back();
        for (const auto& x : row) m.back().push_back(static_cast<int>(x));
    }
    return m;
}

std::vector<int> ints_from_json(const nlohmann::json& j, const std::string& where) {
    std::vector<int> out;
    for (const auto& x : vector_from_json(j, where)) out.push_back(static_cast<int>(x));
    return out;
}

const nlohmann::json& field(const nlohmann::json& j, const std::string& key, const std::string& file) {
    if (!j.is_object() || !j.contains(key)) throw InvalidInput(file + ": missing field '" + key + "'");
    return j.at(key);
}

// ---- groups --------------------------------------------------------------------

int cmd_groups(const Config& cfg, std::ostream& out) {
    if (cfg.labels < 1) throw InvalidInput("--labels: must be at least 1");
    auto g = build_tree_group(group_kind_from_string(cfg.kind), cfg.order, cfg.labels, cfg.limits());
    if (cfg.json()) {
        out << g->to_json().dump(2) << "\n";
        return exit_pass;
    }
    std::vector<Integer> torsion = g->group->torsion();
    out << to_string(g->kind) << "(" << g->order << ", " << g->labels << ") = " << g->group->describe() << "\n"
        << "rank        " << g->group->rank() << "\n"
        << "torsion     " << join(torsion) << "\n"
        << "generators  " << g->generator_count() << "\n"
        << "relations   " << g->group->relations().size() << "\n";
    return exit_pass;
}

// ---- verify ----------------------------------------------------------------------

int cmd_verify(const Config& cfg, std::ostream& out) {
    TreeGroupCache cache(cfg.limits());
    const auto start = std::chrono::steady_clock::now();
    std::vector<SuiteResult> results;
    auto need_labels = [&] {
        if (cfg.labels < 1) throw InvalidInput("--labels: must be at least 1");
    };
    if (cfg.check == "exact35") {
        need_labels();
        results.push_back(suite_exact(cfg.order, cfg.labels, cache));
    } else if (cfg.check == "cor420") {
        need_labels();
        results.push_back(suite_universal(cfg.order, cfg.labels, cache));
    } else if (cfg.check == "cor415") {
        results.push_back(suite_symmetric_sequence(cfg.samples, cfg.seed));
    } else if (cfg.check == "lemma41") {
        need_labels();
        results.push_back(suite_split_independence(cfg.labels, cfg.samples, cfg.seed, cache));
        results.push_back(suite_invariance(cfg.labels, cache));
    } else {
        throw InvalidInput("verify: unknown check '" + cfg.check + "'");
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    bool pass = true;
    auto certificate = nlohmann::json::array();
    for (const auto& r : results) {
        pass = pass && r.pass;
        certificate.push_back(r.to_json());
    }
    if (cfg.json()) {
        out << nlohmann::json{{"check", cfg.check}, {"pass", pass}, {"certificate", certificate}}.dump(2) << "\n";
    } else {
        out << (pass ? "PASS " : "FAIL ") << cfg.check;
        for (const auto& r : results) out << " [" << r.name << "]";
        out << " (" << std::fixed << std::setprecision(3) << elapsed.count() << " s)\n";
        if (!pass) out << certificate.dump(2) << "\n";
    }
    return pass ? exit_pass : exit_verification;
}

// ---- form ------------------------------------------------------------------------

SymIntForm lattice_input(const Config& cfg) {
    if (!cfg.named.empty() && !cfg.input.empty()) throw InvalidInput("give one of --named and --input");
    if (!cfg.named.empty()) return named_form(cfg.named);
    if (!cfg.input.empty()) return sym_form_from_json(read_json(cfg.input));
    throw InvalidInput("a form is required: --named or --input");
}

int emit_value(const Config& cfg, std::ostream& out, const std::string& name, const nlohmann::json& value,
               nlohmann::json extra = nlohmann::json::object()) {
    if (cfg.json()) {
        extra[name] = value;
        out << extra.dump(2) << "\n";
    } else {
        out << value.dump() << "\n";
    }
    return exit_pass;
}

int cmd_form(const Config& cfg, std::ostream& out) {
    if (cfg.action == "tau" || cfg.action == "ks") {
        auto f = lattice_input(cfg);
        Vector c = cfg.c.empty() ? find_characteristic(f) : to_vector([&] {
            auto xs = parse_int_list(cfg.c, "--c", f.rank());
            return std::vector<std::int64_t>(xs.begin(), xs.end());
        }());
        nlohmann::json extra{{"rank", f.rank()}, {"signature", signature(f)}, {"c", to_json(c)}};
        if (cfg.action == "tau") return emit_value(cfg, out, "tau", tau(f, c), extra);
        if (cfg.tau_m != 0 && cfg.tau_m != 1) throw InvalidInput("--tau: must be 0 or 1");
        return emit_value(cfg, out, "ks", ks(f, c, cfg.tau_m), extra);
    }
    if (cfg.action == "arf") {
        Z2QuadraticSpace v;
        if (!cfg.input.empty()) {
            auto j = read_json(cfg.input);
            v.form = z2_matrix_from_json(field(j, "form", cfg.input), "form");
            v.q = ints_from_json(field(j, "q", cfg.input), "q");
            if (v.q.size() != v.form.size()) throw InvalidInput("q: expected one value per basis vector");
        } else {
            if (cfg.q.empty()) throw InvalidInput("arf needs --input or --q");
            auto q = to_ints(parse_int_list(cfg.q, "--q", cfg.dim));
            if (q.size() % 2) throw InvalidInput("--q: a hyperbolic space has even dimension");
            v = Z2QuadraticSpace::hyperbolic(q.size() / 2, q);
        }
        return emit_value(cfg, out, "arf", arf_z2(v), {{"dim", v.dim()}});
    }
    if (cfg.action == "brown") {
        Z4Refinement r;
        if (!cfg.input.empty()) {
            auto j = read_json(cfg.input);
            r.form = z2_matrix_from_json(field(j, "form", cfg.input), "form");
            r.mu = ints_from_json(field(j, "mu", cfg.input), "mu");
            if (r.mu.size() != r.form.size()) throw InvalidInput("mu: expected one value per basis vector");
        } else if (!cfg.mu.empty()) {
            r.mu = to_ints(parse_int_list(cfg.mu, "--mu", cfg.dim));
            r.form.assign(r.mu.size(), std::vector<int>(r.mu.size(), 0));
            for (std::size_t i = 0; i < r.mu.size(); ++i) r.form[i][i] = 1;
        } else if (!cfg.q.empty()) {
            auto q = to_ints(parse_int_list(cfg.q, "--q", cfg.dim));
            if (q.size() % 2) throw InvalidInput("--q: a hyperbolic space has even dimension");
            r = Z4Refinement::doubled(Z2QuadraticSpace::hyperbolic(q.size() / 2, q));
        } else {
            throw InvalidInput("brown needs --input, --mu or --q");
        }
        return emit_value(cfg, out, "brown", brown_z8(r), {{"dim", r.dim()}});
    }
    if (cfg.action == "universal") {
        if (cfg.input.empty()) throw InvalidInput("universal needs --input");
        auto lam = form_from_json(read_json(cfg.input));
        nlohmann::json j{{"variant", cfg.variant}};
        QuadraticFormData u = [&] {
            if (cfg.variant == "symmetric") return universal_symmetric(lam);
            if (cfg.variant == "commutative") return universal_commutative(lam);
            throw InvalidInput("--variant: expected symmetric or commutative");
        }();
        j["refinement"] = to_json(u);
        j["describe"] = u.target.me->describe();
        if (cfg.variant == "symmetric") {
            auto seq = exact_sequence_symmetric(lam);
            j["exact_sequence"] = {{"p_injective", seq.p_injective},
                                   {"middle_exact", seq.middle.exact},
                                   {"surjective", seq.surjective},
                                   {"pass", seq.pass()}};
        }
        if (cfg.json()) {
            out << j.dump(2) << "\n";
        } else {
            out << "M_e = " << j["describe"].get<std::string>() << "\n"
                << "generators " << u.target.me->generator_count() << " (M first, then mu(a_k))\n";
            if (j.contains("exact_sequence"))
                out << "exact sequence " << (j["exact_sequence"]["pass"].get<bool>() ? "holds" : "FAILS") << "\n";
        }
        return exit_pass;
    }
    throw InvalidInput("form: unknown action '" + cfg.action + "'");
}

// ---- selftest --------------------------------------------------------------------

int cmd_selftest(const Config& cfg, std::ostream& out) {
    SelftestOptions opts;
    opts.seed = cfg.seed;
    opts.jobs = cfg.jobs;
    opts.budget_seconds = cfg.budget;
    opts.limits = cfg.limits();
    auto report = run_selftest(opts);
    if (cfg.json()) {
        out << report.to_json().dump(2) << "\n";
    } else {
        for (const auto& o : report.outcomes) {
            const char* tag = o.pass()                                          ? "PASS"
                              : o.status == JobOutcome::Status::skipped        ? "SKIP"
                              : o.status == JobOutcome::Status::resource_limit ? "LIMIT"
                                                                               : "FAIL";
            out << std::left << std::setw(6) << tag << o.name;
            if (!o.message.empty()) out << "  " << o.message;
            out << "\n";
        }
        out << (report.pass() ? "PASS" : "FAIL") << " selftest seed " << cfg.seed << "\n";
    }
    if (report.pass()) return exit_pass;
    bool failed = false;
    for (const auto& o : report.outcomes)
        if (o.status == JobOutcome::Status::done || o.status == JobOutcome::Status::error) failed = failed || !o.pass();
    if (failed) return exit_verification;
    return exit_resource;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config cfg;
    CLI::App app{"Tree groups, quadratic refinements and lattice invariants."};
    app.name("treeforms");
    app.require_subcommand(1);
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "table"}));
    app.add_option("--max-generators", cfg.max_generators, "Cap on tree generators per group")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-dimension", cfg.max_dimension, "Cap on matrix dimension in linear algebra")
        ->check(CLI::PositiveNumber);

    auto* groups = app.add_subcommand("groups", "Presentation summary of L, T or Tinf");
    groups->add_option("--kind", cfg.kind, "L, T or Tinf")->required()->check(CLI::IsMember({"L", "T", "Tinf"}));
    groups->add_option("--order", cfg.order, "Order n")->required();
    groups->add_option("--labels", cfg.labels, "Number of labels m")->required();

    auto* verify = app.add_subcommand("verify", "Run one verification and print a certificate");
    verify->add_option("check", cfg.check, "exact35: the tree exact sequence; cor420: universal refinement against Tinf; "
                       "cor415: symmetric sequences on random forms; lemma41: split independence and invariance")
        ->required()
        ->check(CLI::IsMember({"exact35", "cor420", "cor415", "lemma41"}));
    verify->add_option("--order", cfg.order, "Order n");
    verify->add_option("--labels", cfg.labels, "Number of labels m");
    verify->add_option("--samples", cfg.samples, "Random instances")->check(CLI::PositiveNumber);
    verify->add_option("--seed", cfg.seed, "Random seed");

    auto* form = app.add_subcommand("form", "Invariants of forms");
    form->add_option("action", cfg.action, "tau, ks, arf, brown or universal")
        ->required()
        ->check(CLI::IsMember({"tau", "ks", "arf", "brown", "universal"}));
    form->add_option("--named", cfg.named, "E8, H or diag(a,b,...)");
    form->add_option("--input", cfg.input, "JSON input file");
    form->add_option("--c", cfg.c, "Characteristic vector, comma separated");
    form->add_option("--tau", cfg.tau_m, "tau of the manifold, for ks");
    form->add_option("--dim", cfg.dim, "Dimension of the Z2 space");
    form->add_option("--q", cfg.q, "Z2 values of q on a hyperbolic basis");
    form->add_option("--mu", cfg.mu, "Z4 values on an orthonormal basis");
    form->add_option("--variant", cfg.variant, "symmetric or commutative")
        ->check(CLI::IsMember({"symmetric", "commutative"}));

    auto* selftest = app.add_subcommand("selftest", "Run every verification grid");
    selftest->add_option("--seed", cfg.seed, "Random seed");
    selftest->add_option("--jobs", cfg.jobs, "Concurrent jobs")->check(CLI::PositiveNumber);
    selftest->add_option("--budget", cfg.budget, "Time budget in seconds (0: none)")->check(CLI::NonNegativeNumber);

    std::vector<std::string> storage{"treeforms"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_pass : exit_input;
    }

    try {
        if (*groups) return cmd_groups(cfg, out);
        if (*verify) return cmd_verify(cfg, out);
        if (*form) return cmd_form(cfg, out);
        if (*selftest) return cmd_selftest(cfg, out);
    } catch (const ResourceLimit& e) {
        err << "resource limit: " << e.what() << "\n";
        return exit_resource;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const NotWellDefined& e) {
        err << "error: input is not well defined: " << e.what() << "\n";
        return exit_input;
    } catch (const AxiomViolation& e) {
        err << "error: input violates an axiom: " << e.what() << "\n";
        return exit_input;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const std::exception& e) {
        err << "verification failure: " << e.what() << "\n";
        return exit_verification;
    }
    return exit_input;
}

}  // namespace treeforms
