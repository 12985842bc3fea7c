#include "blowup/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "blowup/parallel.hpp"
#include "blowup/potential_well.hpp"

namespace blowup {

std::vector<std::string> profile_families() { return {"ramp", "sine", "random"}; }

DiscreteFn initial_profile(const Grid& grid, const std::string& family, double amplitude, std::uint64_t seed) {
    const double L = grid.length();
    if (family == "ramp") return DiscreteFn::from(grid, [&](double x) { return amplitude * x / L; });
    if (family == "sine") {
        return DiscreteFn::from(grid, [&](double x) { return amplitude * std::sin(0.5 * std::numbers::pi * x / L); });
    }
    if (family == "random") {
        auto rng = item_rng(seed, 0);
        std::normal_distribution<double> coef(0.0, 1.0);
        std::vector<double> c(8);
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = coef(rng) / static_cast<double>(k + 1);
        DiscreteFn u = DiscreteFn::from(grid, [&](double x) {
            double s = 0.0;
            for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * std::sin((k + 0.5) * std::numbers::pi * x / L);
            return s;
        });
        const double top = sup_norm(u);
        return top > 0.0 ? (amplitude / top) * u : u;
    }
    throw std::invalid_argument("unknown data family '" + family + "'");
}

namespace {

void require_increasing(const std::vector<double>& g, const char* name) {
    if (g.empty()) throw std::invalid_argument(std::string(name) + " is empty");
    for (std::size_t i = 1; i < g.size(); ++i) {
        if (!(g[i] > g[i - 1])) throw std::invalid_argument(std::string(name) + " must be strictly increasing");
    }
}

ModelParams cell_params(const SweepConfig& config, double p, double m) {
    ModelParams params = config.params;
    params.p = p;
    params.m = m;
    params.n = config.n;
    normalize_damping(params, true);
    return params;
}

}  // namespace

void validate(const SweepConfig& config) {
    require_increasing(config.p_grid, "p grid");
    require_increasing(config.m_grid, "m grid");
    if (config.p_grid.front() <= 2.0) throw std::invalid_argument("every p must exceed 2");
    if (config.m_grid.front() <= 1.0) throw std::invalid_argument("every m must exceed 1");
    if (config.n < 1) throw std::invalid_argument("n must be at least 1");
    if (config.N < 3) throw std::invalid_argument("N must be at least 3");
    if (!(config.L > 0.0)) throw std::invalid_argument("L must be positive");
    if (!(config.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (config.seeds.empty()) throw std::invalid_argument("seed list is empty");
    if (!is_pure_power(config.params)) throw std::invalid_argument("sweeps need the pure-power source (a = 0, b = 1)");
    const auto fams = profile_families();
    if (std::find(fams.begin(), fams.end(), config.family) == fams.end()) {
        throw std::invalid_argument("unknown data family '" + config.family + "'");
    }
    for (double p : config.p_grid) {
        for (double m : config.m_grid) blowup::validate(cell_params(config, p, m));
    }
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    validate(config);
    const Grid grid(config.L, config.N);

    std::map<double, WellConstants> wells;
    for (double p : config.p_grid) wells.emplace(p, compute_well(grid, p));

    struct Job {
        double p;
        double m;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (double p : config.p_grid)
        for (double m : config.m_grid)
            for (std::uint64_t s : config.seeds) jobs.push_back({p, m, s});

    std::vector<SweepRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            const Job& job = jobs[i];
            const ModelParams params = cell_params(config, job.p, job.m);
            const DiscreteFn u0 = initial_profile(grid, config.family, config.amplitude, job.seed);
            const DiscreteFn u1(grid);
            const WellConstants& wc = wells.at(job.p);
            const Classification cls = classify(u0, u1, wc, params);
            const Region reg = region(config.n, job.p, job.m);
            const Trajectory traj = simulate(grid, params, u0, u1, config.horizon, config.controls);

            SweepRow& r = rows[i];
            r.n = config.n;
            r.p = job.p;
            r.m = job.m;
            r.mu = params.mu;
            r.alpha = params.alpha;
            r.beta = params.beta;
            r.seed = job.seed;
            r.N = config.N;
            r.E0 = cls.E;
            r.in_Wu = cls.in_Wu;
            r.m0 = reg.m0;
            r.old_thm = reg.old_thm;
            r.new_thm = reg.new_thm;
            r.outcome = traj.outcome;
            if (traj.t_blow_bracket) {
                r.t_blow_lo = traj.t_blow_bracket->first;
                r.t_blow_hi = traj.t_blow_bracket->second;
            }
            r.u_inf_max = 0.0;
            for (const Sample& s : traj.samples) r.u_inf_max = std::max(r.u_inf_max, s.u_inf);
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(jobs.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

const char* fmt(bool b) { return b ? "true" : "false"; }

}  // namespace

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << kSweepHeader << '\n';
    for (const SweepRow& r : rows) {
        os << r.n << ',' << fmt(r.p) << ',' << fmt(r.m) << ',' << fmt(r.mu) << ',' << fmt(r.alpha) << ','
           << fmt(r.beta) << ',' << r.seed << ',' << r.N << ',' << fmt(r.E0) << ',' << fmt(r.in_Wu) << ','
           << fmt(r.m0) << ',' << fmt(r.old_thm) << ',' << fmt(r.new_thm) << ',' << to_string(r.outcome) << ','
           << (r.t_blow_lo ? fmt(*r.t_blow_lo) : "") << ',' << (r.t_blow_hi ? fmt(*r.t_blow_hi) : "") << ','
           << fmt(r.u_inf_max) << '\n';
    }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kSweepHeader) throw std::invalid_argument("not a sweep CSV (bad header)");
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 17) throw std::invalid_argument("sweep CSV row with " + std::to_string(f.size()) + " fields");
        auto flag = [](const std::string& s) {
            if (s == "true") return true;
            if (s == "false") return false;
            throw std::invalid_argument("bad boolean '" + s + "'");
        };
        auto opt = [](const std::string& s) -> std::optional<double> {
            if (s.empty()) return std::nullopt;
            return std::stod(s);
        };
        SweepRow r;
        r.n = std::stoi(f[0]);
        r.p = std::stod(f[1]);
        r.m = std::stod(f[2]);
        r.mu = std::stod(f[3]);
        r.alpha = std::stod(f[4]);
        r.beta = std::stod(f[5]);
        r.seed = std::stoull(f[6]);
        r.N = std::stoull(f[7]);
        r.E0 = std::stod(f[8]);
        r.in_Wu = flag(f[9]);
        r.m0 = std::stod(f[10]);
        r.old_thm = flag(f[11]);
        r.new_thm = flag(f[12]);
        r.outcome = outcome_from_string(f[13]);
        r.t_blow_lo = opt(f[14]);
        r.t_blow_hi = opt(f[15]);
        r.u_inf_max = std::stod(f[16]);
        rows.push_back(r);
    }
    return rows;
}

bool is_counterexample(const SweepRow& row) {
    return row.in_Wu && row.new_thm && row.outcome != Outcome::blowup_detected;
}

bool inconclusive_dominated(const std::vector<SweepRow>& rows) {
    const auto bad = std::count_if(rows.begin(), rows.end(),
                                   [](const SweepRow& r) { return r.outcome == Outcome::inconclusive; });
    return 2 * static_cast<std::size_t>(bad) > rows.size();
}

}  // namespace blowup
