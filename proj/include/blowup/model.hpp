// Model nonlinearities of the damped wave problem
//
//     u_tt - u_xx = f(u)              in (0, L)
//     u = 0                           at x = 0
//     u_x = -Q(u_t)                   at x = L
//
// with source  f(u) = a|u|^{q-2}u + b|u|^{p-2}u
// and damping  Q(v) = alpha (|v|^{m-2}v + beta |v|^{mu-2}v).
#pragma once

#include <cstdint>

namespace blowup {

struct ModelParams {
    double p = 4.0;      // source exponent, > 2
    double q = 2.0;      // secondary source exponent, 2 <= q < p
    double a = 0.0;      // secondary source coefficient
    double b = 1.0;      // main source coefficient
    double m = 2.0;      // main damping exponent, > 1
    double mu = 2.0;     // secondary damping exponent, 1 < mu <= m
    double alpha = 1.0;  // damping weight at x = L, >= 0
    double beta = 0.0;   // secondary damping coefficient, >= 0
    int n = 1;           // ambient dimension used by the region predicates
};

/// Throws std::invalid_argument on any violated parameter invariant.
void validate(const ModelParams& params);

/// With beta == 0 the secondary damping term vanishes and mu is set to m.
/// Returns true when that substitution happened; a notice is written to
/// std::clog unless `quiet` is set.
bool normalize_damping(ModelParams& params, bool quiet = false);

/// True for the pure-power source |u|^{p-2}u used by the well theory.
bool is_pure_power(const ModelParams& params);

/// sign(x)|x|^e with an explicit zero branch.
double signed_pow(double x, double e);

struct SourceValue {
    double f;
    double F;
};

struct DampingValue {
    double Q;
    double Phi;
    double Qv;
};

SourceValue eval_source(const ModelParams& params, double u);
DampingValue eval_damping(const ModelParams& params, double v);

/// df/du.
double source_derivative(const ModelParams& params, double u);

/// dQ/dv; +inf at v = 0 when an active exponent is below 2.
double damping_derivative(const ModelParams& params, double v);

struct AssumptionReport {
    std::int64_t samples = 0;

    // Monotonicity (Q(v) - Q(w))(v - w) >= 0.
    std::int64_t q1_violations = 0;
    // Smallest observed (Q(v)-Q(w))(v-w) / (alpha |v-w|^m); certified only for m >= 2.
    double q1_witness_const = 0.0;
    bool q1_const_certified = false;

    // Largest observed |Q(v)| / (alpha (|v|^{mu-1} + |v|^{m-1})).
    double q2_witness_c1 = 0.0;

    // Qv >= c4 alpha (|v|^mu + |v|^m), counted against q3_c4_floor.
    std::int64_t q3_violations = 0;
    double q3_witness_c4 = 0.0;

    // Qv >= alpha |v|^m.
    std::int64_t low_violations = 0;

    // Largest observed |f(u)-f(v)| / (|u-v| (1 + |u|^{p-2} + |v|^{p-2})).
    double f1_witness_c2 = 0.0;

    // f u - (p - eps) F >= (b eps / p)|u|^p at eps = (p - q)/2; needs a <= 0 < b.
    bool f3_applicable = false;
    double f3_epsilon = 0.0;
    std::int64_t f3_violations = 0;
    double f3_witness_c5 = 0.0;

    // f u >= p F.
    std::int64_t quadr_violations = 0;
};

struct SamplerOptions {
    double magnitude_lo = 1e-6;
    double magnitude_hi = 1e6;
    // A Q3 sample fails when Qv / (alpha(|v|^mu + |v|^m)) drops below this.
    double q3_c4_floor = 1e-3;
    unsigned workers = 1;
};

/// Seeded sampling check of the structural assumptions on Q and f. The
/// parameters are checked as given (no mu normalization).
AssumptionReport check_model_assumptions(const ModelParams& params, std::int64_t sample_count,
                                         std::uint64_t seed, const SamplerOptions& options = {});

}  // namespace blowup
