// ccbell: command-line front end for the communication-complexity Bell tests.
//
// Exit codes: 0 success, 1 computational guard exceeded, 2 input error.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccbell/ccbell.hpp"

namespace {

using namespace ccbell;

constexpr int kExitGuard = 1;
constexpr int kExitInput = 2;

// ---------------------------------------------------------------------------
// Parsing helpers

double parse_number(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        return parse_number(text.substr(0, slash)) / parse_number(text.substr(slash + 1));
    }
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty()) throw InputError("not a number: '" + text + "'");
    return v;
}

std::vector<double> parse_delta_grid(const std::string& text) {
    if (text.empty() || text == "default") return default_delta_grid();
    if (text == "dense") return dense_half_delta_grid();
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const double d = parse_number(item);
        if (!(d > 0.0 && d < 1.0)) throw InputError("delta grid entries must lie in (0,1)");
        grid.push_back(d);
    }
    if (grid.empty()) throw InputError("delta grid must be nonempty");
    return grid;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

// "phiplus", "mixed", "werner:p" or "isotropic:p".
QState parse_state(const std::string& spec, int d) {
    if (spec == "phiplus") return phi_plus(d);
    if (spec == "mixed") return maximally_mixed_pair(d);
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const std::string kind = spec.substr(0, colon);
        const double p = parse_number(spec.substr(colon + 1));
        if (kind == "isotropic") return isotropic(d, p);
        if (kind == "werner") {
            if (d != 2) throw InputError("werner states are two-qubit; use isotropic:p");
            return werner(p);
        }
    }
    throw InputError("unknown state '" + spec + "' (phiplus, mixed, werner:p, isotropic:p)");
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
    std::string input;
    std::string output;
    std::string format = "csv";
    std::uint64_t seed = 1;
    std::string delta_grid = "default";
    double tol = 1e-7;
    double const_c = 1.0;
    double const_cp = 1.0;
    double const_cpp = 1.0;
    double alpha = 1.0;
    long long trials = 1000000;

    std::string builtin;
    std::string box;
    std::string protocol;
    std::string state = "phiplus";
    std::string inequality = "communication";
    std::string rhs = "exact";
    bool refine = false;
    bool per_delta = false;
    int max_bits = -1;
    int k = 1;
    std::string family = "vsp";
    double n = 1e4;
    int points = 100;
    unsigned workers = 0;
};

CommProblem load_problem(const RunConfig& cfg) {
    if (!cfg.input.empty()) return problem_from_json_text(read_file(cfg.input));
    if (cfg.builtin == "rac") return rac21();
    throw InputError("no problem given: use --input FILE or --builtin rac");
}

std::optional<QuantumProtocol> load_protocol(const RunConfig& cfg) {
    if (!cfg.protocol.empty()) return protocol_from_json_text(read_file(cfg.protocol));
    if (cfg.builtin == "rac") return rac_quantum_protocol();
    return std::nullopt;
}

CorrelationBox load_box(const RunConfig& cfg, const CommProblem& problem) {
    if (!cfg.box.empty()) return box_from_json_text(read_file(cfg.box));
    const auto proto = load_protocol(cfg);
    if (!proto) throw InputError("no box given: use --box FILE, --protocol FILE or --builtin rac");
    return box_from_protocol(*proto, parse_state(cfg.state, proto->dim()), problem);
}

AsymptoticFamily family_from(const RunConfig& cfg) {
    AsymptoticFamily fam;
    if (cfg.family == "vsp") fam.kind = AsymptoticFamily::Kind::Vsp;
    else if (cfg.family == "phm") fam.kind = AsymptoticFamily::Kind::AlphaPhm;
    else throw InputError("unknown family '" + cfg.family + "' (vsp, phm)");
    fam.c = cfg.const_c;
    fam.c_prime = cfg.const_cp;
    fam.c_double_prime = cfg.const_cpp;
    fam.alpha = cfg.alpha;
    fam.validate();
    return fam;
}

// "exact", "pumped:C23" or "vsp:N" (with --const-c).
RhsModel rhs_from(const RunConfig& cfg, const CommProblem& problem) {
    if (cfg.rhs == "exact") return exact_rhs(exact_curve(problem, cfg.input.empty() ? cfg.builtin : cfg.input));
    const auto colon = cfg.rhs.find(':');
    if (colon != std::string::npos) {
        const std::string kind = cfg.rhs.substr(0, colon);
        const double v = parse_number(cfg.rhs.substr(colon + 1));
        if (kind == "pumped") {
            if (!(v >= 0.0)) throw InputError("C(2/3) must be nonnegative");
            return pumped_rhs(v);
        }
        if (kind == "vsp") {
            AsymptoticFamily fam;
            fam.c = cfg.const_c;
            return vsp_rhs(v, fam);
        }
    }
    throw InputError("unknown rhs '" + cfg.rhs + "' (exact, pumped:C, vsp:N)");
}

void check_format(const RunConfig& cfg) {
    if (cfg.format != "csv" && cfg.format != "json") throw InputError("format must be csv or json");
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Subcommands

std::string cmd_cc(const RunConfig& cfg) {
    const CommProblem problem = load_problem(cfg);
    const int max_bits = cfg.max_bits >= 0 ? cfg.max_bits : full_disclosure_bits(problem);
    std::vector<double> values;
    for (int b = 0; b <= max_bits; ++b) values.push_back(optimal_success(problem, b, {.workers = cfg.workers}));
    if (cfg.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (int b = 0; b <= max_bits; ++b) rows.push_back({{"bits", b}, {"optimal_success", values[b]}});
        return json_text({{"rows", rows}});
    }
    CsvTable t({"bits", "optimal_success"});
    for (int b = 0; b <= max_bits; ++b) t.add_row({std::to_string(b), format_double(values[b])});
    return t.str();
}

std::string cmd_bell(const RunConfig& cfg) {
    const CommProblem problem = load_problem(cfg);
    const CorrelationBox box = load_box(cfg, problem);
    const NonSignalingReport ns = check_nonsignaling(box, 1e-9);
    if (!ns.passed) {
        std::cerr << "warning: box fails the non-signaling check (alice deviation "
                  << format_double(ns.alice_deviation) << ", bob deviation " << format_double(ns.bob_deviation)
                  << "); evaluating anyway\n";
    }

    if (cfg.inequality == "rac") {
        const double value = rac_inequality(box);
        const bool violated = rac_violated(value);
        if (cfg.format == "json") {
            return json_text({{"inequality", "rac"},
                              {"value", value},
                              {"local_bound", kRacLocalBound},
                              {"violated", violated},
                              {"nonsignaling", ns.passed}});
        }
        CsvTable t({"quantity", "value"});
        t.add_row({"inequality", "rac"});
        t.add_row({"value", format_double(value)});
        t.add_row({"local_bound", format_double(kRacLocalBound)});
        t.add_row({"violated", bool_text(violated)});
        t.add_row({"nonsignaling", bool_text(ns.passed)});
        return t.str();
    }
    if (cfg.inequality != "communication") throw InputError("inequality must be rac or communication");

    const BoxSummary summary = summarize(box, problem);
    const BellReport report =
        evaluate(summary, rhs_from(cfg, problem), {.delta_grid = parse_delta_grid(cfg.delta_grid), .refine = cfg.refine});
    if (cfg.format == "json") {
        nlohmann::json j = report_to_json(report);
        j["inequality"] = "communication";
        j["nonsignaling"] = ns.passed;
        j["undefined_pairs"] = summary.undefined_pairs.size();
        return json_text(j);
    }
    if (cfg.per_delta) {
        CsvTable t({"delta", "target", "lhs", "rhs"});
        for (const auto& r : report.per_delta) {
            t.add_row({format_double(r.delta), format_double(r.target), format_double(r.lhs), format_double(r.rhs)});
        }
        return t.str();
    }
    CsvTable t({"quantity", "value"});
    t.add_row({"inequality", "communication"});
    t.add_row({"p_A", format_double(report.p_A)});
    t.add_row({"p_B", format_double(report.p_B)});
    t.add_row({"delta_star", format_double(report.delta_star)});
    t.add_row({"lhs", format_double(report.lhs)});
    t.add_row({"rhs", format_double(report.rhs)});
    t.add_row({"violated", bool_text(report.violated)});
    t.add_row({"rhs_source", to_string(report.rhs_source)});
    t.add_row({"undefined_pairs", std::to_string(summary.undefined_pairs.size())});
    t.add_row({"nonsignaling", bool_text(ns.passed)});
    return t.str();
}

std::string cmd_curves(const RunConfig& cfg) {
    const AsymptoticFamily fam = family_from(cfg);
    if (cfg.points < 2) throw InputError("--points must be at least 2");
    const auto p_grid = uniform_grid(0.5, 1.0, cfg.points);
    const auto delta_grid = cfg.delta_grid == "default" ? dense_half_delta_grid() : parse_delta_grid(cfg.delta_grid);
    const auto rows = fam.kind == AsymptoticFamily::Kind::Vsp ? vsp_curves(cfg.n, fam, p_grid, delta_grid)
                                                               : phm_curves(cfg.n, fam, p_grid, delta_grid);
    if (cfg.format == "json") {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& r : rows) {
            out.push_back({{"p_B", r.p_B},
                           {"complexity", r.complexity},
                           {"boundary", r.boundary},
                           {"construction_region", to_string(r.construction_region)}});
        }
        return json_text({{"family", fam.describe()}, {"n", cfg.n}, {"rows", out}});
    }
    CsvTable t({"p_B", "complexity", "boundary", "construction_region"});
    for (const auto& r : rows) {
        t.add_row({format_double(r.p_B), format_double(r.complexity), format_double(r.boundary),
                   to_string(r.construction_region)});
    }
    return t.str();
}

std::string cmd_noise(const RunConfig& cfg) {
    const CommProblem problem = load_problem(cfg);
    const auto proto = load_protocol(cfg);
    if (!proto) throw InputError("noise needs --protocol FILE or --builtin rac");
    NoiseOptions opts;
    opts.tol = cfg.tol;
    if (cfg.inequality == "rac") {
        opts.inequality = InequalityKind::Rac;
    } else if (cfg.inequality == "communication") {
        opts.inequality = InequalityKind::Communication;
        opts.rhs = rhs_from(cfg, problem);
        opts.evaluate = {.delta_grid = parse_delta_grid(cfg.delta_grid), .refine = cfg.refine};
    } else {
        throw InputError("inequality must be rac or communication");
    }
    const NoiseThreshold t = noise_threshold(*proto, problem, opts);
    if (cfg.format == "json") {
        nlohmann::json j{{"inequality", cfg.inequality}, {"found", t.found}, {"iterations", t.iterations}};
        if (t.found) {
            j["p_star"] = t.p_star;
            j["lower"] = t.lower;
            j["upper"] = t.upper;
        } else {
            j["p_star"] = "none";
        }
        return json_text(j);
    }
    CsvTable table({"inequality", "p_star", "lower", "upper", "iterations"});
    table.add_row({cfg.inequality, t.found ? format_double(t.p_star) : "none",
                   t.found ? format_double(t.lower) : "none", t.found ? format_double(t.upper) : "none",
                   std::to_string(t.iterations)});
    return table.str();
}

std::string cmd_simulate(const RunConfig& cfg) {
    const CommProblem problem = load_problem(cfg);
    const CorrelationBox box = load_box(cfg, problem);
    const PiBProtocol proto = compile(box, problem, cfg.k);
    const SimulationResult r = simulate(proto, cfg.trials, cfg.seed, cfg.workers);
    const double exact = exact_success(proto);
    const double guaranteed = guaranteed_success(proto);
    if (cfg.format == "json") {
        return json_text({{"k", proto.k},
                          {"copies", proto.copies},
                          {"message_bits", proto.message_bits},
                          {"seed", cfg.seed},
                          {"trials", r.trials},
                          {"successes", r.successes},
                          {"success", r.success},
                          {"standard_error", r.standard_error},
                          {"exact_success", exact},
                          {"guaranteed_success", guaranteed}});
    }
    CsvTable t({"k", "copies", "message_bits", "seed", "trials", "successes", "success", "standard_error",
                "exact_success", "guaranteed_success"});
    t.add_row({std::to_string(proto.k), std::to_string(proto.copies), std::to_string(proto.message_bits),
               std::to_string(cfg.seed), std::to_string(r.trials), std::to_string(r.successes),
               format_double(r.success), format_double(r.standard_error), format_double(exact),
               format_double(guaranteed)});
    return t.str();
}

// ---------------------------------------------------------------------------

void add_io(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--output,-o", cfg.output, "Output file (default: stdout)");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

void add_problem(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--input,-i", cfg.input, "Problem JSON file");
    sub->add_option("--builtin", cfg.builtin, "Built-in problem and protocol")->check(CLI::IsMember({"rac"}));
}

void add_box(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--box", cfg.box, "Correlation box JSON file");
    sub->add_option("--protocol", cfg.protocol, "Quantum protocol JSON file");
    sub->add_option("--state", cfg.state, "Shared state: phiplus, mixed, werner:p, isotropic:p");
}

void add_rhs(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--rhs", cfg.rhs, "Right-hand side: exact, pumped:C23, vsp:N");
    sub->add_option("--delta-grid", cfg.delta_grid, "Comma-separated deltas (a/b allowed), 'default' or 'dense'");
    sub->add_flag("--refine", cfg.refine, "Golden-section refinement around the best grid delta");
    sub->add_option("--const-c", cfg.const_c, "VSP constant c");
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Communication-complexity Bell tests"};
    app.require_subcommand(1);
    app.add_option("--workers", cfg.workers, "Worker threads (0 = hardware concurrency)");

    auto* cc = app.add_subcommand("cc", "Exact one-way distributional complexity table");
    add_io(cc, cfg);
    add_problem(cc, cfg);
    cc->add_option("--max-bits", cfg.max_bits, "Largest bit budget (default: full disclosure)")
        ->check(CLI::NonNegativeNumber);

    auto* bell = app.add_subcommand("bell", "Evaluate a Bell test on a box");
    add_io(bell, cfg);
    add_problem(bell, cfg);
    add_box(bell, cfg);
    add_rhs(bell, cfg);
    bell->add_option("--inequality", cfg.inequality, "rac or communication")->check(CLI::IsMember({"rac", "communication"}));
    bell->add_flag("--per-delta", cfg.per_delta, "CSV: emit the per-delta table instead of the summary");

    auto* curves = app.add_subcommand("curves", "Complexity and detection-boundary curves");
    add_io(curves, cfg);
    curves->add_option("--family", cfg.family, "vsp or phm")->check(CLI::IsMember({"vsp", "phm"}));
    curves->add_option("--n", cfg.n, "Problem size");
    curves->add_option("--points", cfg.points, "Number of p_B grid points in [1/2, 1]");
    curves->add_option("--delta-grid", cfg.delta_grid, "Comma-separated deltas for the boundary (default: dense)");
    curves->add_option("--const-c", cfg.const_c, "VSP constant c");
    curves->add_option("--const-cp", cfg.const_cp, "alpha-PHM quantum constant c'");
    curves->add_option("--const-cpp", cfg.const_cpp, "alpha-PHM classical constant c''");
    curves->add_option("--alpha", cfg.alpha, "alpha-PHM parameter");

    auto* noise = app.add_subcommand("noise", "Isotropic-noise threshold of a protocol");
    add_io(noise, cfg);
    add_problem(noise, cfg);
    noise->add_option("--protocol", cfg.protocol, "Quantum protocol JSON file");
    add_rhs(noise, cfg);
    noise->add_option("--inequality", cfg.inequality, "rac or communication")->check(CLI::IsMember({"rac", "communication"}));
    noise->add_option("--tol", cfg.tol, "Bisection tolerance")->check(CLI::PositiveNumber);

    auto* sim = app.add_subcommand("simulate", "Monte Carlo run of the compiled classical protocol");
    add_io(sim, cfg);
    add_problem(sim, cfg);
    add_box(sim, cfg);
    sim->add_option("--k", cfg.k, "delta = 2^-k");
    sim->add_option("--trials", cfg.trials, "Number of trials");
    sim->add_option("--seed", cfg.seed, "Random seed (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        check_format(cfg);
        std::string out;
        if (cc->parsed()) out = cmd_cc(cfg);
        else if (bell->parsed()) out = cmd_bell(cfg);
        else if (curves->parsed()) out = cmd_curves(cfg);
        else if (noise->parsed()) out = cmd_noise(cfg);
        else out = cmd_simulate(cfg);
        write_output(cfg.output, out);
    } catch (const GuardExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    }
    return 0;
}
