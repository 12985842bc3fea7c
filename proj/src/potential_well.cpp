#include "blowup/potential_well.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "blowup/parallel.hpp"
#include "blowup/tridiagonal.hpp"

namespace blowup {

Functionals functionals(const DiscreteFn& u0, const DiscreteFn& u1, const ModelParams& params) {
    require_same_grid(u0, u1);
    const Grid& g = u0.grid();
    double intF = 0.0;
    double intfu = 0.0;
    for (std::size_t i = 0; i < g.nodes(); ++i) {
        const SourceValue s = eval_source(params, u0[i]);
        intF += g.weight(i) * s.F;
        intfu += g.weight(i) * s.f * u0[i];
    }
    const double grad2 = std::pow(grad_norm(u0), 2);
    const double J = 0.5 * grad2 - intF;
    return {J, grad2 - intfu, 0.5 * inner(u1, u1) + J};
}

namespace {

// Interior unknowns u_1..u_{N-1}; u_0 = 0 is implicit.
struct RayleighProblem {
    double h;
    double p;
    std::size_t n;
    std::vector<double> lower, diag, upper;

    RayleighProblem(const Grid& grid, double p_) : h(grid.spacing()), p(p_), n(grid.nodes() - 1) {
        lower.assign(n, -1.0 / h);
        upper.assign(n, -1.0 / h);
        diag.assign(n, 2.0 / h);
        diag[n - 1] = 1.0 / h;
    }

    double weight(std::size_t i) const { return i + 1 == n ? 0.5 * h : h; }

    double energy(const std::vector<double>& x) const {
        double s = 0.0, prev = 0.0;
        for (double v : x) {
            s += (v - prev) * (v - prev);
            prev = v;
        }
        return s / h;
    }

    double phi(const std::vector<double>& x) const {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += weight(i) * std::pow(std::abs(x[i]), p);
        return s;
    }

    void normalize(std::vector<double>& x) const {
        const double scale = 1.0 / std::sqrt(energy(x));
        for (double& v : x) v *= scale;
    }

    // H^1-Riesz representative of the derivative of phi.
    std::vector<double> riesz_gradient(const std::vector<double>& x) const {
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ax = std::abs(x[i]);
            rhs[i] = ax == 0.0 ? 0.0 : p * weight(i) * std::pow(ax, p - 2.0) * x[i];
        }
        return solve_tridiagonal(lower, diag, upper, rhs);
    }
};

struct AscentResult {
    std::vector<double> x;
    double ratio;
    int iterations;
    bool converged;
};

AscentResult ascend(const RayleighProblem& prob, std::vector<double> x, const SobolevOptions& opt) {
    prob.normalize(x);
    double phi = prob.phi(x);
    double ratio = std::pow(phi, 1.0 / prob.p);
    double theta = 1.0;
    std::vector<double> trial(prob.n);
    for (int it = 1; it <= opt.max_iterations; ++it) {
        const std::vector<double> g = prob.riesz_gradient(x);
        const double inv = 1.0 / (prob.p * phi);
        bool accepted = false;
        double new_phi = phi;
        while (theta > 1e-12) {
            // theta = 1 is the fixed-point step x -> g / |g|; it ascends because phi is convex.
            for (std::size_t i = 0; i < prob.n; ++i) trial[i] = (1.0 - theta) * x[i] + theta * inv * g[i];
            prob.normalize(trial);
            new_phi = prob.phi(trial);
            if (new_phi > phi) {
                accepted = true;
                break;
            }
            theta *= 0.5;
        }
        if (!accepted) return {std::move(x), ratio, it, true};
        const double new_ratio = std::pow(new_phi, 1.0 / prob.p);
        const double gain = new_ratio - ratio;
        x.swap(trial);
        phi = new_phi;
        ratio = new_ratio;
        if (gain < opt.tolerance) return {std::move(x), ratio, it, true};
        theta = std::min(2.0 * theta, 1.8);
    }
    return {std::move(x), ratio, opt.max_iterations, false};
}

}  // namespace

SobolevResult sobolev_B1(const Grid& grid, double p, const SobolevOptions& options) {
    if (!std::isfinite(p) || p <= 2.0) throw std::invalid_argument("sobolev_B1 needs finite p > 2");
    const RayleighProblem prob(grid, p);
    const double L = grid.length();

    // Start 0 is u = x; the rest are seeded sine series vanishing at 0.
    const std::size_t starts = 1 + options.random_restarts;
    std::vector<AscentResult> results(starts);
    parallel_chunks(starts, std::max(1u, options.workers), [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t s = begin; s < end; ++s) {
            std::vector<double> x(prob.n);
            if (s == 0) {
                for (std::size_t i = 0; i < prob.n; ++i) x[i] = grid.x(i + 1);
            } else {
                auto rng = item_rng(options.seed, s);
                std::normal_distribution<double> normal;
                constexpr int modes = 12;
                double coeff[modes];
                for (int k = 0; k < modes; ++k) coeff[k] = normal(rng) / ((k + 1.0) * (k + 1.0));
                for (std::size_t i = 0; i < prob.n; ++i) {
                    const double xi = grid.x(i + 1);
                    double v = 0.0;
                    for (int k = 0; k < modes; ++k) v += coeff[k] * std::sin((k + 0.5) * std::numbers::pi * xi / L);
                    x[i] = v;
                }
                if (prob.energy(x) == 0.0) x[prob.n - 1] = 1.0;
            }
            results[s] = ascend(prob, std::move(x), options);
        }
    });

    std::size_t best = 0;
    bool all_converged = true;
    for (std::size_t s = 0; s < starts; ++s) {
        all_converged = all_converged && results[s].converged;
        if (results[s].ratio > results[best].ratio) best = s;
    }

    std::vector<double> values(grid.nodes(), 0.0);
    const double sign = results[best].x.back() < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < prob.n; ++i) values[i + 1] = sign * results[best].x[i];
    return {results[best].ratio, DiscreteFn(grid, std::move(values)), results[best].iterations, all_converged};
}

WellConstants well_constants(double B1, double p) {
    if (!(B1 > 0.0) || !std::isfinite(B1)) throw std::invalid_argument("B1 must be finite and positive");
    if (!(p > 2.0) || !std::isfinite(p)) throw std::invalid_argument("p must be finite and exceed 2");
    WellConstants wc;
    wc.p = p;
    wc.B1 = B1;
    wc.K0 = std::pow(B1, p) / p;
    wc.lambda1 = lambda1_from_K0(wc.K0, p);
    wc.E1 = (0.5 - 1.0 / p) * wc.lambda1 * wc.lambda1;
    return wc;
}

double lambda1_from_K0(double K0, double p) { return std::pow(p * K0, -1.0 / (p - 2.0)); }

double lambda1_from_B1(double B1, double p) { return std::pow(B1, -p / (p - 2.0)); }

double pure_power_J(const DiscreteFn& u, double p) {
    return 0.5 * std::pow(grad_norm(u), 2) - lp_power(u, p) / p;
}

RayMax ray_max(const DiscreteFn& u, double p) {
    const double gn = grad_norm(u);
    const double lp = lp_norm(u, p);
    if (gn == 0.0 || lp == 0.0) throw std::invalid_argument("ray_max needs a nonzero profile");
    const double lambda_star = std::pow(gn, 2.0 / (p - 2.0)) / std::pow(lp, p / (p - 2.0));
    const double J_max = (0.5 - 1.0 / p) * std::pow(gn / lp, 2.0 * p / (p - 2.0));
    return {lambda_star, J_max};
}

Depth depth_d(const Grid& grid, double p, const SobolevOptions& options) {
    const SobolevResult s = sobolev_B1(grid, p, options);
    return {ray_max(s.maximizer, p).J_max, s.converged};
}

WellConstants compute_well(const Grid& grid, double p, const SobolevOptions& options) {
    SobolevResult s = sobolev_B1(grid, p, options);
    WellConstants wc = well_constants(s.B1, p);
    wc.d = ray_max(s.maximizer, p).J_max;
    wc.maximizer = std::move(s.maximizer);
    wc.converged = s.converged;
    return wc;
}

Classification classify(const DiscreteFn& u0, const DiscreteFn& u1, const WellConstants& wc,
                        const ModelParams& params) {
    if (!is_pure_power(params)) throw std::invalid_argument("classify needs the pure-power source (a = 0, b = 1)");
    if (std::isnan(wc.d)) throw std::invalid_argument("classify needs the well depth d");
    const Functionals fn = functionals(u0, u1, params);
    const double gn = grad_norm(u0);
    const bool nonzero = sup_norm(u0) > 0.0;
    Classification c;
    c.K = fn.K;
    c.E = fn.E;
    c.grad_norm = gn;
    c.in_W = fn.E < wc.E1 && gn > wc.lambda1;
    c.in_Wu = nonzero && fn.K <= 0.0 && fn.E < wc.d;
    return c;
}

double m0_threshold(int n, double p) {
    const double nn = n;
    return (2.0 * (nn + 1.0) * p - 4.0 * (nn - 1.0)) / (nn * (p - 2.0) + 4.0);
}

Region region(int n, double p, double m) {
    if (n < 1) throw std::invalid_argument("dimension n must be at least 1");
    if (!(p > 2.0) || !std::isfinite(p)) throw std::invalid_argument("region needs finite p > 2");
    if (!(m > 1.0) || !std::isfinite(m)) throw std::invalid_argument("region needs finite m > 1");
    Region r;
    r.two_star = n <= 2 ? std::numeric_limits<double>::infinity() : 2.0 * n / (n - 2.0);
    r.p_admissible = p <= 1.0 + r.two_star / 2.0;
    r.m0 = m0_threshold(n, p);
    r.old_thm = m < r.m0;
    r.new_thm = m < 1.0 + p / 2.0;
    r.open_zone = !r.new_thm;
    return r;
}

}  // namespace blowup
