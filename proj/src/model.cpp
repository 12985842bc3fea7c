#include "blowup/model.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <vector>

#include "blowup/parallel.hpp"

namespace blowup {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite_all(std::initializer_list<double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

double abs_pow(double x, double e) { return x == 0.0 ? (e > 0.0 ? 0.0 : (e == 0.0 ? 1.0 : kInf)) : std::pow(std::abs(x), e); }

}  // namespace

void validate(const ModelParams& params) {
    if (!finite_all({params.p, params.q, params.a, params.b, params.m, params.mu, params.alpha, params.beta})) {
        throw std::invalid_argument("model parameters must be finite");
    }
    if (params.p <= 2.0) throw std::invalid_argument("source exponent p must exceed 2");
    if (params.m <= 1.0) throw std::invalid_argument("damping exponent m must exceed 1");
    if (params.mu <= 1.0 || params.mu > params.m) {
        throw std::invalid_argument("secondary damping exponent must satisfy 1 < mu <= m");
    }
    if (params.alpha < 0.0) throw std::invalid_argument("damping weight alpha must be nonnegative");
    if (params.beta < 0.0) throw std::invalid_argument("damping coefficient beta must be nonnegative");
    if (params.a != 0.0 && (params.q < 2.0 || params.q >= params.p)) {
        throw std::invalid_argument("secondary source exponent must satisfy 2 <= q < p");
    }
    if (params.n < 1) throw std::invalid_argument("dimension n must be at least 1");
}

bool normalize_damping(ModelParams& params, bool quiet) {
    if (params.beta != 0.0 || params.mu == params.m) return false;
    if (!quiet) {
        std::clog << "note: beta = 0, setting mu := m (" << params.m << ")\n";
    }
    params.mu = params.m;
    return true;
}

bool is_pure_power(const ModelParams& params) { return params.a == 0.0 && params.b == 1.0; }

double signed_pow(double x, double e) {
    if (x == 0.0) return 0.0;
    const double r = std::pow(std::abs(x), e);
    return x < 0.0 ? -r : r;
}

SourceValue eval_source(const ModelParams& params, double u) {
    if (u == 0.0) return {0.0, 0.0};
    SourceValue out{params.b * signed_pow(u, params.p - 1.0), params.b / params.p * abs_pow(u, params.p)};
    if (params.a != 0.0) {
        out.f += params.a * signed_pow(u, params.q - 1.0);
        out.F += params.a / params.q * abs_pow(u, params.q);
    }
    return out;
}

DampingValue eval_damping(const ModelParams& params, double v) {
    if (v == 0.0 || params.alpha == 0.0) return {0.0, 0.0, 0.0};
    const double am = abs_pow(v, params.m);
    double Q = signed_pow(v, params.m - 1.0);
    double Phi = am / params.m;
    double Qv = am;
    if (params.beta != 0.0) {
        const double amu = abs_pow(v, params.mu);
        Q += params.beta * signed_pow(v, params.mu - 1.0);
        Phi += params.beta * amu / params.mu;
        Qv += params.beta * amu;
    }
    return {params.alpha * Q, params.alpha * Phi, params.alpha * Qv};
}

double source_derivative(const ModelParams& params, double u) {
    double d = params.b * (params.p - 1.0) * abs_pow(u, params.p - 2.0);
    if (params.a != 0.0) d += params.a * (params.q - 1.0) * abs_pow(u, params.q - 2.0);
    return d;
}

double damping_derivative(const ModelParams& params, double v) {
    if (params.alpha == 0.0) return 0.0;
    double d = (params.m - 1.0) * abs_pow(v, params.m - 2.0);
    if (params.beta != 0.0) d += params.beta * (params.mu - 1.0) * abs_pow(v, params.mu - 2.0);
    return params.alpha * d;
}

AssumptionReport check_model_assumptions(const ModelParams& params, std::int64_t sample_count,
                                         std::uint64_t seed, const SamplerOptions& options) {
    if (sample_count < 1) throw std::invalid_argument("sample_count must be at least 1");

    const double log_lo = std::log(options.magnitude_lo);
    const double log_hi = std::log(options.magnitude_hi);
    const double eps = 0.5 * (params.p - params.q);
    const bool f3_applicable = params.a <= 0.0 && params.b > 0.0 && eps > 0.0;
    const bool q1_certifiable = params.m >= 2.0;

    const auto count = static_cast<std::size_t>(sample_count);
    const unsigned workers = std::max(1u, options.workers);
    std::vector<AssumptionReport> partial(workers);

    parallel_chunks(count, workers, [&](std::size_t begin, std::size_t end, unsigned chunk) {
        AssumptionReport r;
        r.q1_witness_const = kInf;
        r.q3_witness_c4 = kInf;
        r.f3_witness_c5 = kInf;
        for (std::size_t i = begin; i < end; ++i) {
            auto rng = item_rng(seed, i);
            std::uniform_real_distribution<double> logmag(log_lo, log_hi);
            std::bernoulli_distribution coin(0.5);
            auto draw = [&] {
                const double x = std::exp(logmag(rng));
                return coin(rng) ? -x : x;
            };
            const double v = draw();
            const double w = draw();
            const double u = draw();
            const double z = draw();

            const DampingValue dv = eval_damping(params, v);
            const DampingValue dw = eval_damping(params, w);

            // (Q1) monotonicity and the |v-w|^m lower constant.
            const double mono = (dv.Q - dw.Q) * (v - w);
            const double mono_tol = 1e-12 * (std::abs(dv.Q) + std::abs(dw.Q)) * std::abs(v - w);
            if (mono < -mono_tol) ++r.q1_violations;
            if (params.alpha > 0.0 && v != w) {
                r.q1_witness_const = std::min(r.q1_witness_const, mono / (params.alpha * abs_pow(v - w, params.m)));
            }

            if (params.alpha > 0.0) {
                // (Q2) growth.
                const double growth = params.alpha * (abs_pow(v, params.mu - 1.0) + abs_pow(v, params.m - 1.0));
                r.q2_witness_c1 = std::max(r.q2_witness_c1, std::abs(dv.Q) / growth);

                // (Q3) coercivity.
                const double coerc = params.alpha * (abs_pow(v, params.mu) + abs_pow(v, params.m));
                const double c4 = dv.Qv / coerc;
                r.q3_witness_c4 = std::min(r.q3_witness_c4, c4);
                if (c4 < options.q3_c4_floor) ++r.q3_violations;

                // Qv >= alpha |v|^m.
                const double low = params.alpha * abs_pow(v, params.m);
                if (dv.Qv < low * (1.0 - 1e-12)) ++r.low_violations;
            }

            // (F1) local Lipschitz bound.
            const SourceValue su = eval_source(params, u);
            const SourceValue sz = eval_source(params, z);
            if (u != z) {
                const double lip = std::abs(su.f - sz.f) /
                                   (std::abs(u - z) * (1.0 + abs_pow(u, params.p - 2.0) + abs_pow(z, params.p - 2.0)));
                r.f1_witness_c2 = std::max(r.f1_witness_c2, lip);
            }

            const double fu = su.f * u;
            const double up = abs_pow(u, params.p);

            if (f3_applicable) {
                const double lhs = fu - (params.p - eps) * su.F;
                const double rhs = params.b * eps / params.p * up;
                const double tol = 1e-12 * (std::abs(fu) + std::abs((params.p - eps) * su.F) + rhs);
                if (lhs < rhs - tol) ++r.f3_violations;
                r.f3_witness_c5 = std::min(r.f3_witness_c5, lhs / up);
            }

            const double pF = params.p * su.F;
            if (fu < pF - 1e-12 * (std::abs(fu) + std::abs(pF))) ++r.quadr_violations;
        }
        partial[chunk] = r;
    });

    AssumptionReport out;
    out.samples = sample_count;
    out.q1_witness_const = kInf;
    out.q3_witness_c4 = kInf;
    out.f3_witness_c5 = kInf;
    for (const auto& r : partial) {
        out.q1_violations += r.q1_violations;
        out.q1_witness_const = std::min(out.q1_witness_const, r.q1_witness_const);
        out.q2_witness_c1 = std::max(out.q2_witness_c1, r.q2_witness_c1);
        out.q3_violations += r.q3_violations;
        out.q3_witness_c4 = std::min(out.q3_witness_c4, r.q3_witness_c4);
        out.low_violations += r.low_violations;
        out.f1_witness_c2 = std::max(out.f1_witness_c2, r.f1_witness_c2);
        out.f3_violations += r.f3_violations;
        out.f3_witness_c5 = std::min(out.f3_witness_c5, r.f3_witness_c5);
        out.quadr_violations += r.quadr_violations;
    }
    out.q1_const_certified = q1_certifiable && params.alpha > 0.0;
    out.f3_applicable = f3_applicable;
    out.f3_epsilon = eps;
    if (!f3_applicable) out.f3_witness_c5 = 0.0;
    return out;
}

}  // namespace blowup
