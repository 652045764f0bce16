#include "champagne/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "champagne/builder.hpp"
#include "champagne/config.hpp"
#include "champagne/errors.hpp"
#include "champagne/schedules.hpp"
#include "champagne/verifier.hpp"
#include "champagne/wos_engine.hpp"

namespace champagne {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

double to_double(const std::string& s) {
    double v = 0;
    const char* b = s.data();
    const char* e = b + s.size();
    while (b < e && *b == ' ') ++b;
    auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc() || r.ptr != e) throw DomainError("not a number: '" + s + "'");
    return v;
}

Vec3 parse_point(const std::string& text, int d) {
    const auto parts = split(text, ',');
    if (static_cast<int>(parts.size()) != d)
        throw DomainError("point '" + text + "' needs " + std::to_string(d) + " coordinates");
    Vec3 p{};
    for (int i = 0; i < d; ++i) p[static_cast<std::size_t>(i)] = to_double(parts[static_cast<std::size_t>(i)]);
    return p;
}

// unit-ball | ball:<point>;<R> | box:<lo>;<hi> | union:<point>,<r>;<point>,<r>;...
Domain parse_domain(const std::string& text, int d) {
    if (text == "unit-ball") return Domain::unit_ball(d);
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw DomainError("unknown domain '" + text + "'");
    const std::string kind = text.substr(0, colon);
    const auto parts = split(text.substr(colon + 1), ';');
    if (kind == "ball" && parts.size() == 2) return Domain::ball(d, parse_point(parts[0], d), to_double(parts[1]));
    if (kind == "box" && parts.size() == 2) return Domain::box(d, parse_point(parts[0], d), parse_point(parts[1], d));
    if (kind == "union") {
        std::vector<BallShape> balls;
        for (const auto& p : parts) {
            const auto cut = p.rfind(',');
            if (cut == std::string::npos) throw DomainError("union ball needs '<point>,<r>': '" + p + "'");
            balls.push_back({parse_point(p.substr(0, cut), d), to_double(p.substr(cut + 1))});
        }
        return Domain::union_of_balls(d, balls);
    }
    throw DomainError("cannot parse domain '" + text + "'");
}

std::pair<long, long> parse_k_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) throw DomainError("k range must look like lo..hi");
    const long lo = std::stol(text.substr(0, dots));
    const long hi = std::stol(text.substr(dots + 2));
    if (lo > hi) throw DomainError("empty k range " + text);
    return {lo, hi};
}

CapacityWeight default_weight(const Schedule& s) {
    switch (s.kind) {
        case ScheduleKind::OneBubble:
            return CapacityWeight::power(2.0);
        case ScheduleKind::PowerLaw:
            return CapacityWeight::power(s.power_eps);
        case ScheduleKind::Tower:
            return CapacityWeight::iter_log_cubed(std::max(1, s.tower_n));
    }
    return CapacityWeight::power(1.0);
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(8);
    os << v;
    return os.str();
}

void print_shells(const ChampagneConfig& cfg, std::ostream& out) {
    out << "construction " << cfg.construction << ", d=" << cfg.d << ", schedule " << cfg.schedule.name()
        << ", weight " << cfg.weight.name() << ", seed " << cfg.seed << "\n";
    std::size_t shown = 0;
    for (const auto& sh : cfg.shells) {
        if (shown++ == 40) {
            out << "  ... " << cfg.shells.size() - 40 << " more shells\n";
            break;
        }
        out << "  ";
        if (sh.cluster >= 0) out << "cluster " << sh.cluster << " ";
        out << "k=" << sh.k << " count=" << sh.count << " R=" << num(sh.R) << " a=" << num(sh.sep)
            << " log r=" << num(sh.log_r) << "\n";
    }
    out << "bubbles " << cfg.bubbles.size() << ", capacity sum " << num(cfg.capacity_sum) << "\n";
}

struct BuildArgs {
    int d = 2;
    std::string schedule;
    std::string weight;
    std::string construction = "ball";
    std::string k_range;
    std::optional<long> k0;
    std::optional<long> k2;
    std::string out = "config.json";
    std::uint64_t seed = 0;
    // corollary
    std::string y;
    double r = 0.5, R = 1.0, gamma = 0.5, delta_y = 1.0, c_eff = 2.2;
    // general
    std::string domain = "unit-ball";
    int levels = 2;
    double delta = 1.0;
    std::uint64_t max_bubbles = 20'000'000;
};

int run_build(const BuildArgs& a, std::ostream& out, std::ostream& err) {
    const Schedule s0 = Schedule::parse(a.schedule, a.d, a.k0);
    std::optional<std::pair<long, long>> kr;
    if (!a.k_range.empty()) kr = parse_k_range(a.k_range);
    Schedule s = s0;
    if (!a.k0 && kr && a.construction == "ball") s.k0 = kr->first;
    const CapacityWeight w = a.weight.empty() ? default_weight(s) : CapacityWeight::parse(a.weight);
    const long horizon = std::max(kr ? kr->second : s.k0, s.k0 + 64);
    const ValidationReport v = validate_schedule(s, w, horizon, a.k2);
    if (!v.pass()) {
        const auto* f = v.first_failure();
        err << "validation failed: " << f->name << ": " << f->evidence << "\n";
        return 2;
    }
    BuildOptions opt;
    opt.k2 = a.k2;
    opt.max_bubbles = a.max_bubbles;
    ChampagneConfig cfg;
    if (a.construction == "ball") {
        if (!kr) throw DomainError("ball construction needs --k lo..hi");
        cfg = build_ball_config(s, w, kr->first, kr->second, a.d, a.seed, opt);
    } else if (a.construction == "corollary") {
        const Vec3 y = a.y.empty() ? Vec3{} : parse_point(a.y, a.d);
        cfg = build_corollary_config(y, a.r, a.R, a.gamma, a.delta_y, s, w, a.c_eff, a.seed, opt);
    } else if (a.construction == "general") {
        const Domain dom = parse_domain(a.domain, a.d);
        cfg = build_general_config(dom, auto_exhaustion(dom, a.levels), a.delta, s, w, a.c_eff, a.seed, opt);
    } else {
        throw DomainError("unknown construction '" + a.construction + "'");
    }
    save_config(cfg, a.out);
    print_shells(cfg, out);
    out << "wrote " << a.out << "\n";
    return 0;
}

struct SimArgs {
    std::string config;
    std::string annulus;
    int d = 2;
    std::vector<std::string> starts;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out;
    double eps_obstacle = 1e-3;
    double eps_boundary = -1;
    std::uint64_t max_steps = 1'000'000;
    double timeout_cap = 1e-3;
};

int run_simulate(const SimArgs& a, std::ostream& out, std::ostream& err) {
    if (a.config.empty() == a.annulus.empty()) throw DomainError("give exactly one of --config and --annulus");
    ChampagneConfig cfg;
    std::vector<Vec3> starts;
    std::string source;
    if (!a.config.empty()) {
        cfg = load_config(a.config);
        source = "config=" + a.config;
    } else {
        double r = -1, R = -1, s = -1;
        for (const auto& kv : split(a.annulus, ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw DomainError("annulus needs r=..,R=..,s=..");
            const std::string key = kv.substr(0, eq);
            const double v = to_double(kv.substr(eq + 1));
            if (key == "r") r = v;
            else if (key == "R") R = v;
            else if (key == "s") s = v;
            else throw DomainError("unknown annulus key '" + key + "'");
        }
        if (!(r > 0 && R > r && s > r && s < R)) throw DomainError("annulus needs 0 < r < s < R");
        cfg = make_annulus_config(a.d, r, R);
        starts.push_back(Vec3{s, 0.0, 0.0});
        source = "annulus r=" + num(r) + ",R=" + num(R) + ",s=" + num(s);
    }
    for (const auto& t : a.starts) starts.push_back(parse_point(t, cfg.d));
    if (starts.empty()) throw DomainError("no start points (use --start)");

    WosParams p;
    p.eps_obstacle = a.eps_obstacle;
    p.eps_boundary = a.eps_boundary;
    p.max_steps = a.max_steps;
    p.timeout_cap = a.timeout_cap;
    p.threads = a.threads;
    const WosEngine engine(cfg);

    // thread count is deliberately absent: output bytes must not depend on it
    std::ostringstream csv;
    csv << "# champagne simulate " << source << "\n";
    csv << "# d=" << cfg.d << " trials=" << a.trials << " seed=" << a.seed << " eps_obstacle=" << num(p.eps_obstacle)
        << " eps_boundary=" << num(p.eps_boundary) << " max_steps=" << p.max_steps
        << " timeout_cap=" << num(p.timeout_cap) << "\n";
    csv << estimate_csv_header(cfg.d) << "\n";
    bool flagged = false;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        const HitEstimate e = engine.hit_probability(starts[i], a.trials, p, a.seed + i);
        flagged = flagged || e.flagged;
        csv << estimate_csv_row(e) << "\n";
    }
    if (a.out.empty()) {
        out << csv.str();
    } else {
        std::ofstream f(a.out, std::ios::binary);
        if (!f) throw Error("cannot write " + a.out);
        f << csv.str();
        out << "wrote " << starts.size() << " rows to " << a.out << "\n";
    }
    if (flagged) {
        err << "timeout fraction above the cap of " << num(p.timeout_cap)
            << "; raise --max-steps or --eps-obstacle, or check the start points\n";
        return 3;
    }
    return 0;
}

struct VerifyArgs {
    std::string config;
    std::optional<double> delta;
    std::string certificate;
    std::string weight;
    std::string json_out;
    std::string csv_out;
    std::size_t gamma_samples = 8;
    std::uint64_t gamma_trials = 2000;
    std::uint64_t seed = 1;
    bool no_audit = false;
    int threads = 0;
};

VerificationReport make_report(const VerifyArgs& a, const ChampagneConfig& cfg) {
    const CapacityWeight w = a.weight.empty() ? cfg.weight : CapacityWeight::parse(a.weight);
    VerifyOptions opt;
    opt.delta = a.delta;
    opt.gamma_samples = a.gamma_samples;
    opt.gamma_trials = a.gamma_trials;
    opt.seed = a.seed;
    opt.audit = !a.no_audit;
    opt.wos.threads = a.threads;
    if (!a.certificate.empty()) {
        std::ifstream in(a.certificate);
        if (!in) throw Error("cannot read " + a.certificate);
        opt.results = read_estimates_csv(in);
    }
    return verify_config(cfg, w, opt);
}

int run_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    ChampagneConfig cfg;
    try {
        cfg = load_config(a.config);
    } catch (const std::exception& e) {
        err << "cannot load config: " << e.what() << "\n";
        return 2;
    }
    const VerificationReport rep = make_report(a, cfg);
    out << rep.to_table();
    if (!a.json_out.empty()) std::ofstream(a.json_out) << rep.to_json() << "\n";
    if (!a.csv_out.empty()) std::ofstream(a.csv_out) << rep.to_csv();
    if (!rep.pass()) {
        err << "failed checks:";
        for (const auto& c : rep.checks)
            if (!c.pass) err << " " << c.name;
        if (rep.certificate && !rep.certificate->pass) err << " certificate";
        err << "\n";
        return 4;
    }
    return 0;
}

int run_report(const std::string& config, const std::string& results, std::ostream& out, std::ostream& err) {
    ChampagneConfig cfg;
    try {
        cfg = load_config(config);
    } catch (const std::exception& e) {
        err << "cannot load config: " << e.what() << "\n";
        return 2;
    }
    print_shells(cfg, out);
    if (!cfg.levels.empty()) {
        for (const auto& lv : cfg.levels)
            out << "level " << lv.n << ": shrink " << num(lv.shrink) << ", b " << num(lv.b) << ", " << lv.y_count
                << " centers, delta_y " << num(lv.delta_y) << ", level budget " << num(lv.delta_level) << "\n";
    }
    if (!results.empty()) {
        std::ifstream in(results);
        if (!in) throw Error("cannot read " + results);
        for (const auto& e : read_estimates_csv(in)) {
            out << "start (";
            for (int i = 0; i < e.d; ++i) out << (i ? "," : "") << num(e.start[static_cast<std::size_t>(i)]);
            out << "): p_hat " << num(e.p_hat) << " +- " << num(e.ci_halfwidth_3sigma) << " (3 sigma), " << e.trials
                << " trials, " << e.timeouts << " timeouts\n";
        }
    }
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Champagne subregions: build bubble configurations, estimate hitting probabilities, verify sums"};
    app.set_config("--params", "", "TOML or INI file with option values (flags override it)");
    app.require_subcommand(1);

    BuildArgs b;
    auto* build = app.add_subcommand("build", "Build a configuration and write it as JSON");
    build->add_option("--d", b.d, "Dimension (2 or 3)")->required();
    build->add_option("--schedule", b.schedule, "one-bubble | power-law:M=<int>,eps=<real> | tower:n=<int>")->required();
    build->add_option("--weight", b.weight, "power:eps=<real> | iterlog3:n=<int> | thm1-d2:n=<int> | thm1-d3:n=<int>");
    build->add_option("--construction", b.construction, "ball | corollary | general")->capture_default_str();
    build->add_option("--k", b.k_range, "Shell range lo..hi (ball construction)");
    build->add_option("--k0", b.k0, "First admissible shell (default: lo of --k)");
    build->add_option("--k2", b.k2, "Smallest shell used by the construction (default: k1)");
    build->add_option("--out", b.out, "Output JSON")->capture_default_str();
    build->add_option("--seed", b.seed, "Net rotation seed")->capture_default_str();
    build->add_option("--y", b.y, "Corollary center");
    build->add_option("--r", b.r, "Corollary inner radius")->capture_default_str();
    build->add_option("--R", b.R, "Corollary outer radius")->capture_default_str();
    build->add_option("--gamma", b.gamma, "Corollary target hitting probability")->capture_default_str();
    build->add_option("--delta-y", b.delta_y, "Corollary capacity budget")->capture_default_str();
    build->add_option("--c-eff", b.c_eff, "Calibrated per-ball hitting constant")->capture_default_str();
    build->add_option("--domain", b.domain, "unit-ball | ball:<p>;<R> | box:<lo>;<hi> | union:<p>,<r>;...")
        ->capture_default_str();
    build->add_option("--levels", b.levels, "Exhaustion levels (general)")->capture_default_str();
    build->add_option("--delta", b.delta, "Total capacity budget (general)")->capture_default_str();
    build->add_option("--max-bubbles", b.max_bubbles, "Refuse larger constructions")->capture_default_str();

    SimArgs s;
    auto* sim = app.add_subcommand("simulate", "Walk-on-spheres hitting probabilities, written as CSV");
    sim->add_option("--config", s.config, "Configuration JSON");
    sim->add_option("--annulus", s.annulus, "Single centered bubble: r=<inner>,R=<outer>,s=<start radius>");
    sim->add_option("--d", s.d, "Dimension for --annulus")->capture_default_str();
    sim->add_option("--start", s.starts, "Start point x,y[,z]; repeatable");
    sim->add_option("--trials", s.trials, "Trials per start point")->capture_default_str();
    sim->add_option("--seed", s.seed, "Seed of the first start point (row i uses seed + i)")->capture_default_str();
    sim->add_option("--threads", s.threads, "Worker threads (default: CHAMPAGNE_THREADS or all cores)");
    sim->add_option("--out", s.out, "CSV output (default: stdout)");
    sim->add_option("--eps-obstacle", s.eps_obstacle, "Absorption layer relative to the bubble radius")
        ->capture_default_str();
    sim->add_option("--eps-boundary", s.eps_boundary, "Absolute boundary layer (default: 1e-6 diameter)");
    sim->add_option("--max-steps", s.max_steps, "Steps before a trial times out")->capture_default_str();
    sim->add_option("--timeout-cap", s.timeout_cap, "Largest tolerated timeout fraction")->capture_default_str();

    VerifyArgs v;
    auto* ver = app.add_subcommand("verify", "Capacity sums, shell identities and the product-bound certificate");
    ver->add_option("--config", v.config, "Configuration JSON")->required();
    ver->add_option("--delta", v.delta, "Require capacity sum < delta");
    ver->add_option("--certificate", v.certificate, "Results CSV from simulate; first row is the global estimate");
    ver->add_option("--weight", v.weight, "Override the stored capacity weight");
    ver->add_option("--json", v.json_out, "Write the report as JSON");
    ver->add_option("--csv", v.csv_out, "Write the per-shell table as CSV");
    ver->add_option("--gamma-samples", v.gamma_samples, "Start points per shell estimate")->capture_default_str();
    ver->add_option("--gamma-trials", v.gamma_trials, "Trials per shell start point")->capture_default_str();
    ver->add_option("--seed", v.seed, "Seed for the shell estimates")->capture_default_str();
    ver->add_option("--threads", v.threads, "Worker threads");
    ver->add_flag("--no-audit", v.no_audit, "Skip the disjointness sweep");

    std::string rep_config, rep_results;
    auto* rep = app.add_subcommand("report", "Summarize a configuration and optional results CSV");
    rep->add_option("--config", rep_config, "Configuration JSON")->required();
    rep->add_option("--results", rep_results, "Results CSV from simulate");

    if (argc <= 1) {
        out << app.help();
        return 1;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return 0;
    } catch (const CLI::ParseError& e) {
        const auto subs = app.get_subcommands();
        err << e.what() << "\n";
        out << (subs.empty() ? app.help() : subs.front()->help());
        return 1;
    }
    try {
        if (build->parsed()) return run_build(b, out, err);
        if (sim->parsed()) return run_simulate(s, out, err);
        if (ver->parsed()) return run_verify(v, out, err);
        if (rep->parsed()) return run_report(rep_config, rep_results, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"champagne"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace champagne
