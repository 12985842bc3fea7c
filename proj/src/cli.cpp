#include "blowup/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "blowup/config.hpp"
#include "blowup/dynamics.hpp"
#include "blowup/parallel.hpp"
#include "blowup/potential_well.hpp"
#include "blowup/sweep.hpp"
#include "blowup/trace_inequality.hpp"

namespace blowup {

namespace {

const std::vector<std::string> kCommands{"well",  "classify", "simulate", "check-assumptions",
                                         "trace", "region",   "sweep",    "chart"};

const std::vector<std::string> kConfigKeys{
    "p",       "m",       "mu",    "alpha",  "beta",   "q",      "a",     "b",     "n",         "N",
    "L",       "horizon", "seed",  "workers", "preset", "family", "amplitude", "samples", "p_grid", "m_grid",
    "seeds",   "p_min",   "p_max", "sweep_csv", "E2",  "format", "cfl",   "u_max"};

struct Flags {
    std::string command;
    std::string config;
    std::optional<double> p, m, mu, alpha, beta, L, horizon;
    std::optional<int> n;
    std::optional<long long> N, seed, workers;
    std::optional<std::string> out, preset;
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

const char* fmt(bool b) { return b ? "true" : "false"; }

// Defaults, then config file, then flags.
class Settings {
public:
    Settings(const Flags& flags, Config config) : flags_(flags), config_(std::move(config)) {}

    double real(const std::string& key, const std::optional<double>& flag, double fallback) const {
        if (flag) return *flag;
        return config_.number(key).value_or(fallback);
    }
    long long integer(const std::string& key, const std::optional<long long>& flag, long long fallback) const {
        if (flag) return *flag;
        return config_.integer(key).value_or(fallback);
    }
    std::string text(const std::string& key, const std::optional<std::string>& flag, const std::string& fallback) const {
        if (flag) return *flag;
        return config_.text(key).value_or(fallback);
    }

    ModelParams params() const {
        ModelParams P;
        P.p = real("p", flags_.p, P.p);
        P.m = real("m", flags_.m, P.m);
        P.alpha = real("alpha", flags_.alpha, P.alpha);
        P.beta = real("beta", flags_.beta, P.beta);
        P.q = config_.number("q").value_or(P.q);
        P.a = config_.number("a").value_or(P.a);
        P.b = config_.number("b").value_or(P.b);
        P.n = static_cast<int>(integer("n", flags_.n ? std::optional<long long>(*flags_.n) : std::nullopt, P.n));
        const bool mu_given = flags_.mu || config_.has("mu");
        P.mu = real("mu", flags_.mu, P.m);
        if (!mu_given || P.beta == 0.0) normalize_damping(P, !mu_given);
        validate(P);
        return P;
    }

    std::size_t nodes(std::size_t fallback) const {
        const long long N = integer("N", flags_.N, static_cast<long long>(fallback));
        if (N < 3) throw std::invalid_argument("N must be at least 3");
        return static_cast<std::size_t>(N);
    }
    double length() const { return real("L", flags_.L, 1.0); }
    double horizon(double fallback) const { return real("horizon", flags_.horizon, fallback); }
    std::uint64_t seed(std::uint64_t fallback) const {
        const long long s = integer("seed", flags_.seed, static_cast<long long>(fallback));
        if (s < 0) throw std::invalid_argument("seed must be nonnegative");
        return static_cast<std::uint64_t>(s);
    }
    unsigned workers() const {
        const long long w = integer("workers", flags_.workers, default_workers());
        if (w < 1) throw std::invalid_argument("workers must be at least 1");
        return static_cast<unsigned>(w);
    }
    std::optional<std::string> preset() const {
        if (flags_.preset) return flags_.preset;
        return config_.text("preset");
    }
    const Config& config() const { return config_; }
    const Flags& flags() const { return flags_; }

private:
    Flags flags_;
    Config config_;
};

// Writes to --out when given, otherwise to the default stream.
void emit(const Flags& flags, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
    if (!flags.out) {
        body(fallback);
        return;
    }
    std::ofstream file(*flags.out);
    if (!file) throw ConfigError("cannot write '" + *flags.out + "'");
    body(file);
}

struct Problem {
    Grid grid;
    ModelParams params;
    DiscreteFn u0;
    DiscreteFn u1;
    double horizon;
    Controls controls;
};

Problem problem_from(const Settings& s) {
    if (const auto name = s.preset()) {
        Preset pr = make_preset(*name);
        return {pr.u0.grid(), pr.params, pr.u0, pr.u1, s.horizon(pr.horizon), pr.controls};
    }
    const Grid grid(s.length(), s.nodes(257));
    const ModelParams params = s.params();
    const std::string family = s.config().text("family").value_or("ramp");
    const double amplitude = s.config().number("amplitude").value_or(1.0);
    Controls c;
    c.cfl = s.config().number("cfl").value_or(c.cfl);
    c.u_max = s.config().number("u_max").value_or(c.u_max);
    return {grid, params, initial_profile(grid, family, amplitude, s.seed(1)), DiscreteFn(grid), s.horizon(5.0), c};
}

SobolevOptions sobolev_options(const Settings& s) {
    SobolevOptions o;
    o.seed = s.seed(o.seed);
    o.workers = s.workers();
    return o;
}

int cmd_well(const Settings& s, std::ostream& out) {
    const ModelParams P = s.params();
    const Grid grid(s.length(), s.nodes(257));
    const WellConstants wc = compute_well(grid, P.p, sobolev_options(s));
    const double gap = std::abs(wc.d - wc.E1) / wc.E1;
    emit(s.flags(), out, [&](std::ostream& o) {
        o << "p=" << fmt(P.p) << "\nN=" << grid.nodes() << "\nL=" << fmt(grid.length()) << "\nB1=" << fmt(wc.B1)
          << "\nK0=" << fmt(wc.K0) << "\nlambda1=" << fmt(wc.lambda1) << "\nE1=" << fmt(wc.E1) << "\nd=" << fmt(wc.d)
          << "\nd_rel_gap=" << fmt(gap) << "\nd_equals_E1=" << fmt(gap <= 1e-6) << "\nconverged=" << fmt(wc.converged)
          << '\n';
    });
    return kExitOk;
}

int cmd_classify(const Settings& s, std::ostream& out) {
    const Problem pb = problem_from(s);
    if (!is_pure_power(pb.params)) throw std::invalid_argument("classify needs the pure-power source (a = 0, b = 1)");
    const WellConstants wc = compute_well(pb.grid, pb.params.p, sobolev_options(s));
    const Classification c = classify(pb.u0, pb.u1, wc, pb.params);
    emit(s.flags(), out, [&](std::ostream& o) {
        o << "K=" << fmt(c.K) << "\nE=" << fmt(c.E) << "\ngrad_norm=" << fmt(c.grad_norm)
          << "\nlambda1=" << fmt(wc.lambda1) << "\nE1=" << fmt(wc.E1) << "\nd=" << fmt(wc.d) << "\nin_W=" << fmt(c.in_W)
          << "\nin_Wu=" << fmt(c.in_Wu) << '\n';
    });
    return kExitOk;
}

int cmd_simulate(const Settings& s, std::ostream& out, std::ostream& err) {
    const Problem pb = problem_from(s);
    Trajectory traj = simulate(pb.grid, pb.params, pb.u0, pb.u1, pb.horizon, pb.controls);
    if (is_pure_power(pb.params)) {
        const WellConstants wc = compute_well(pb.grid, pb.params.p, sobolev_options(s));
        const double E0 = traj.samples.front().E;
        const double E2 = s.config().number("E2").value_or(E0 < wc.E1 ? default_E2(E0, wc.E1) : wc.E1);
        attach(traj, diagnostics(traj, wc, E2));
    }
    std::string format = s.config().text("format").value_or("");
    if (format.empty()) {
        const std::string path = s.flags().out.value_or("");
        const bool nd = path.ends_with(".ndjson") || path.ends_with(".jsonl");
        format = nd ? "ndjson" : "csv";
    }
    if (format != "csv" && format != "ndjson") throw ConfigError("format must be csv or ndjson");
    emit(s.flags(), out, [&](std::ostream& o) {
        if (format == "csv") write_csv(o, traj);
        else write_ndjson(o, traj);
    });

    std::ostream& summary = s.flags().out ? out : err;
    summary << "outcome=" << to_string(traj.outcome) << "\nsteps=" << traj.steps
            << "\nt_end=" << fmt(traj.samples.back().t);
    if (traj.t_blow_bracket) {
        summary << "\nt_blow_lo=" << fmt(traj.t_blow_bracket->first) << "\nt_blow_hi=" << fmt(traj.t_blow_bracket->second);
    }
    if (!traj.diagnostic.empty()) summary << "\ndiagnostic=" << traj.diagnostic;
    summary << '\n';
    return kExitOk;
}

int cmd_check_assumptions(const Settings& s, std::ostream& out) {
    const ModelParams P = s.params();
    SamplerOptions opt;
    opt.workers = s.workers();
    const long long samples = s.config().integer("samples").value_or(10000);
    const AssumptionReport r = check_model_assumptions(P, samples, s.seed(1), opt);
    emit(s.flags(), out, [&](std::ostream& o) {
        o << "samples=" << r.samples << "\nq1_violations=" << r.q1_violations
          << "\nq1_witness_const=" << fmt(r.q1_witness_const) << "\nq1_const_certified=" << fmt(r.q1_const_certified)
          << "\nq2_witness_c1=" << fmt(r.q2_witness_c1) << "\nq3_violations=" << r.q3_violations
          << "\nq3_witness_c4=" << fmt(r.q3_witness_c4) << "\nlow_violations=" << r.low_violations
          << "\nf1_witness_c2=" << fmt(r.f1_witness_c2) << "\nf3_applicable=" << fmt(r.f3_applicable)
          << "\nf3_epsilon=" << fmt(r.f3_epsilon) << "\nf3_violations=" << r.f3_violations
          << "\nf3_witness_c5=" << fmt(r.f3_witness_c5) << "\nquadr_violations=" << r.quadr_violations << '\n';
    });
    return kExitOk;
}

int cmd_trace(const Settings& s, std::ostream& out) {
    const ModelParams P = s.params();
    const Grid grid(s.length(), s.nodes(257));
    const AuxSolution aux = solve_aux_neumann(grid);
    const SobolevResult sob = sobolev_B1(grid, P.p, sobolev_options(s));
    const double C1 = constant_C1(aux, P.p, P.m, grid.length(), sob.B1);
    const long long samples = s.config().integer("samples").value_or(10000);
    const TraceReport r = verify_trace_inequality(grid, P.p, P.m, C1, samples, s.seed(1), s.workers());
    emit(s.flags(), out, [&](std::ostream& o) {
        o << "w_inf=" << fmt(aux.w_inf) << "\ndw_inf=" << fmt(aux.dw_inf) << "\nB1=" << fmt(sob.B1)
          << "\nC1=" << fmt(C1) << "\nreport=" << to_json(r) << '\n';
    });
    return kExitOk;
}

int cmd_region(const Settings& s, std::ostream& out) {
    const int n = static_cast<int>(s.integer("n", s.flags().n ? std::optional<long long>(*s.flags().n) : std::nullopt, 1));
    const double p = s.real("p", s.flags().p, 4.0);
    const double m = s.real("m", s.flags().m, 2.0);
    const Region r = region(n, p, m);
    emit(s.flags(), out, [&](std::ostream& o) {
        o << "n=" << n << "\np=" << fmt(p) << "\nm=" << fmt(m) << "\ntwo_star=" << fmt(r.two_star)
          << "\np_admissible=" << fmt(r.p_admissible) << "\nm0=" << fmt(r.m0) << "\nold_thm=" << fmt(r.old_thm)
          << "\nnew_thm=" << fmt(r.new_thm) << "\nopen_zone=" << fmt(r.open_zone) << '\n';
    });
    return kExitOk;
}

int cmd_sweep(const Settings& s, std::ostream& out, std::ostream& err) {
    const Config& c = s.config();
    SweepConfig sc;
    sc.p_grid = s.flags().p ? std::vector<double>{*s.flags().p} : c.list("p_grid").value_or(std::vector<double>{});
    sc.m_grid = s.flags().m ? std::vector<double>{*s.flags().m} : c.list("m_grid").value_or(std::vector<double>{});
    ModelParams P;
    P.alpha = s.real("alpha", s.flags().alpha, P.alpha);
    P.beta = s.real("beta", s.flags().beta, P.beta);
    P.mu = s.real("mu", s.flags().mu, P.mu);
    P.q = c.number("q").value_or(P.q);
    P.a = c.number("a").value_or(P.a);
    P.b = c.number("b").value_or(P.b);
    sc.params = P;
    sc.n = static_cast<int>(s.integer("n", s.flags().n ? std::optional<long long>(*s.flags().n) : std::nullopt, 1));
    sc.N = s.nodes(65);
    sc.L = s.length();
    sc.family = c.text("family").value_or(sc.family);
    sc.amplitude = c.number("amplitude").value_or(sc.amplitude);
    sc.horizon = s.horizon(sc.horizon);
    if (s.flags().seed) {
        sc.seeds = {s.seed(1)};
    } else if (const auto seeds = c.list("seeds")) {
        sc.seeds.clear();
        for (double v : *seeds) {
            if (v < 0 || v != std::floor(v)) throw ConfigError("seeds must be nonnegative integers");
            sc.seeds.push_back(static_cast<std::uint64_t>(v));
        }
    } else {
        sc.seeds = {s.seed(1)};
    }
    sc.workers = s.workers();
    sc.controls.cfl = c.number("cfl").value_or(sc.controls.cfl);
    sc.controls.u_max = c.number("u_max").value_or(sc.controls.u_max);
    validate(sc);

    const std::vector<SweepRow> rows = run_sweep(sc);
    emit(s.flags(), out, [&](std::ostream& o) { write_sweep_csv(o, rows); });

    std::size_t bad = 0;
    for (const SweepRow& r : rows) {
        if (!is_counterexample(r)) continue;
        ++bad;
        err << "counterexample: p=" << fmt(r.p) << " m=" << fmt(r.m) << " seed=" << r.seed
            << " outcome=" << to_string(r.outcome) << '\n';
    }
    if (inconclusive_dominated(rows)) {
        err << "sweep dominated by inconclusive runs\n";
        return kExitInconclusive;
    }
    return bad ? kExitCounterexample : kExitOk;
}

int cmd_chart(const Settings& s, std::ostream& out) {
    const Config& c = s.config();
    ChartConfig cc;
    cc.n = static_cast<int>(s.integer("n", s.flags().n ? std::optional<long long>(*s.flags().n) : std::nullopt, 1));
    cc.p_min = c.number("p_min").value_or(cc.p_min);
    cc.p_max = c.number("p_max").value_or(cc.p_max);
    if (const auto path = c.text("sweep_csv")) {
        std::ifstream in(*path);
        if (!in) throw ConfigError("cannot read sweep CSV '" + *path + "'");
        cc.markers = read_sweep_csv(in);
    }
    const std::string svg = emit_region_chart(cc);
    emit(s.flags(), out, [&](std::ostream& o) { o << svg; });
    return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Flags f;
    CLI::App app{"Numerical laboratory for the damped semilinear wave equation", "blowup-lab"};
    app.add_option("command", f.command, "Subcommand")->required()->check(CLI::IsMember(kCommands));
    app.add_option("--config", f.config, "Key = value configuration file");
    app.add_option("--p", f.p, "Source exponent");
    app.add_option("--m", f.m, "Damping exponent");
    app.add_option("--mu", f.mu, "Secondary damping exponent");
    app.add_option("--alpha", f.alpha, "Damping weight");
    app.add_option("--beta", f.beta, "Secondary damping coefficient");
    app.add_option("--n", f.n, "Ambient dimension for the region predicates");
    app.add_option("--N", f.N, "Grid nodes");
    app.add_option("--L", f.L, "Interval length");
    app.add_option("--horizon", f.horizon, "Final time");
    app.add_option("--seed", f.seed, "Random seed");
    app.add_option("--workers", f.workers, "Worker threads (default: BLOWUP_LAB_WORKERS or all cores)");
    app.add_option("--out", f.out, "Output path");
    app.add_option("--preset", f.preset, "blowup-demo, small-data or conservative");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        Config config;
        if (!f.config.empty()) {
            config = Config::load(f.config);
            config.require_known(kConfigKeys);
        }
        const Settings s(f, std::move(config));
        if (f.command == "well") return cmd_well(s, out);
        if (f.command == "classify") return cmd_classify(s, out);
        if (f.command == "simulate") return cmd_simulate(s, out, err);
        if (f.command == "check-assumptions") return cmd_check_assumptions(s, out);
        if (f.command == "trace") return cmd_trace(s, out);
        if (f.command == "region") return cmd_region(s, out);
        if (f.command == "sweep") return cmd_sweep(s, out, err);
        if (f.command == "chart") return cmd_chart(s, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}

}  // namespace blowup
