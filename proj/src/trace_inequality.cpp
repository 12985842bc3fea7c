#include "blowup/trace_inequality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "blowup/parallel.hpp"
#include "blowup/tridiagonal.hpp"

namespace blowup {

AuxSolution solve_aux_neumann(const Grid& grid) {
    const std::size_t n = grid.nodes();
    const double h = grid.spacing();
    std::vector<double> lower(n, -1.0 / h), diag(n), upper(n, -1.0 / h), rhs(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) diag[i] = 2.0 / h + grid.weight(i);
    diag.front() = 1.0 / h + grid.weight(0);
    diag.back() = 1.0 / h + grid.weight(n - 1);
    lower.front() = 0.0;
    upper.back() = 0.0;
    rhs.front() = 1.0;
    rhs.back() = 1.0;

    DiscreteFn w(grid, solve_tridiagonal(lower, diag, upper, rhs));

    // Recovered boundary fluxes, then the interior slopes.
    double dw = std::max(std::abs((w[0] - w[1]) / h + grid.weight(0) * w[0]),
                         std::abs((w[n - 1] - w[n - 2]) / h + grid.weight(n - 1) * w[n - 1]));
    for (std::size_t i = 0; i + 1 < n; ++i) dw = std::max(dw, std::abs(w[i + 1] - w[i]) / h);
    return {w, sup_norm(w), dw};
}

double aux_exact(double x, double length) {
    const double A = (1.0 + std::cosh(length)) / std::sinh(length);
    return A * std::cosh(x) - std::sinh(x);
}

double constant_C1(const AuxSolution& aux, double p, double m, double omega_measure, double B1) {
    if (!(p > 2.0)) throw std::invalid_argument("C1 needs p > 2");
    if (!(m > 1.0 && m <= 1.0 + 0.5 * p)) throw std::invalid_argument("C1 needs 1 < m <= 1 + p/2");
    if (!(omega_measure > 0.0)) throw std::invalid_argument("C1 needs a positive domain measure");
    return aux.w_inf * std::pow(omega_measure, 1.0 - m / p) * B1 +
           m * aux.dw_inf * std::pow(omega_measure, 0.5 - (m - 1.0) / p);
}

const char* to_string(TraceFamily f) {
    switch (f) {
        case TraceFamily::white_noise: return "white_noise";
        case TraceFamily::sine_series: return "sine_series";
        case TraceFamily::spike: return "spike";
    }
    return "?";
}

double trace_ratio(const DiscreteFn& u, double p, double m, double C1) {
    const double lhs = std::pow(std::abs(u.boundary_value()), m);
    const double rhs = C1 * std::pow(lp_norm(u, p), m - 1.0) * grad_norm(u);
    if (rhs == 0.0) return lhs == 0.0 ? std::numeric_limits<double>::quiet_NaN() : std::numeric_limits<double>::infinity();
    return lhs / rhs;
}

DiscreteFn trace_sample(const Grid& grid, std::uint64_t seed, std::uint64_t index, TraceFamily& family) {
    auto rng = item_rng(seed, index);
    const std::size_t n = grid.nodes();
    const double L = grid.length();
    DiscreteFn u(grid);
    family = static_cast<TraceFamily>(index % 3);

    switch (family) {
        case TraceFamily::white_noise: {
            std::uniform_real_distribution<double> val(-1.0, 1.0);
            for (std::size_t i = 1; i < n; ++i) u[i] = val(rng);
            break;
        }
        case TraceFamily::sine_series: {
            std::uniform_int_distribution<int> modes(1, 32);
            std::normal_distribution<double> coef(0.0, 1.0);
            const int K = modes(rng);
            std::vector<double> c(K);
            for (int k = 0; k < K; ++k) c[k] = coef(rng) / (k + 1);
            for (std::size_t i = 1; i < n; ++i) {
                double s = 0.0;
                for (int k = 0; k < K; ++k) s += c[k] * std::sin((k + 0.5) * std::numbers::pi * grid.x(i) / L);
                u[i] = s;
            }
            break;
        }
        case TraceFamily::spike: {
            // x^k with k log-uniform in [1, 4N]: from a ramp down to a one-cell layer at x = L.
            std::uniform_real_distribution<double> logk(0.0, std::log(4.0 * static_cast<double>(n)));
            std::uniform_real_distribution<double> amp(-2.0, 2.0);
            const double k = std::exp(logk(rng));
            const double a = amp(rng);
            for (std::size_t i = 1; i < n; ++i) u[i] = a * std::pow(grid.x(i) / L, k);
            break;
        }
    }
    return u;
}

TraceReport verify_trace_inequality(const Grid& grid, double p, double m, double C1, std::int64_t sample_count,
                                    std::uint64_t seed, unsigned workers) {
    if (sample_count < 0) throw std::invalid_argument("sample_count must be nonnegative");
    TraceReport out;
    out.samples = sample_count;
    out.slack = 10.0 * grid.spacing() * grid.spacing();
    out.p = p;
    out.m = m;
    out.C1 = C1;
    out.nodes = grid.nodes();
    out.seed = seed;

    workers = std::max(1u, workers);
    std::vector<TraceReport> partial(workers);
    parallel_chunks(static_cast<std::size_t>(sample_count), workers,
                    [&](std::size_t begin, std::size_t end, unsigned chunk) {
                        TraceReport r;
                        for (std::size_t i = begin; i < end; ++i) {
                            TraceFamily fam;
                            const DiscreteFn u = trace_sample(grid, seed, i, fam);
                            const double ratio = trace_ratio(u, p, m, C1);
                            if (std::isnan(ratio)) {
                                ++r.skipped;
                                continue;
                            }
                            if (ratio > 1.0 + out.slack) ++r.violations;
                            if (ratio > r.worst_ratio) {
                                r.worst_ratio = ratio;
                                r.worst_family = fam;
                            }
                        }
                        partial[chunk] = r;
                    });
    // Chunks are merged in order, so ties resolve the same way for any worker count.
    for (const auto& r : partial) {
        out.skipped += r.skipped;
        out.violations += r.violations;
        if (r.worst_ratio > out.worst_ratio) {
            out.worst_ratio = r.worst_ratio;
            out.worst_family = r.worst_family;
        }
    }
    return out;
}

std::string to_json(const TraceReport& report) {
    nlohmann::ordered_json j;
    j["N"] = report.nodes;
    j["p"] = report.p;
    j["m"] = report.m;
    j["C1"] = report.C1;
    j["seed"] = report.seed;
    j["samples"] = report.samples;
    j["skipped"] = report.skipped;
    j["violations"] = report.violations;
    j["worst_ratio"] = report.worst_ratio;
    j["worst_family"] = to_string(report.worst_family);
    j["slack"] = report.slack;
    return j.dump();
}

}  // namespace blowup
