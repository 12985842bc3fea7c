// Variational constants of the potential well for the pure-power source.
//
// B1 is the best constant in ||u||_p <= B1 ||u_x||_2 over functions with
// u(0) = 0. From it:
//     K0      = B1^p / p
//     lambda1 = (p K0)^{-1/(p-2)} = B1^{-p/(p-2)}
//     E1      = (1/2 - 1/p) lambda1^2
// and the mountain-pass depth d = inf_u max_{lambda>0} J(lambda u) equals E1.
//
// Classification of initial data:
//     W   = { E < E1 and ||u0_x|| > lambda1 }
//     W_u = { u0 != 0, K(u0) <= 0 and E < d }
// The trivial profile u0 = 0 is left out of W_u (it satisfies the two
// inequalities but cannot be in W).
#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "blowup/grid1d.hpp"
#include "blowup/model.hpp"

namespace blowup {

struct Functionals {
    double J;
    double K;
    double E;
};

/// J = 1/2||u0_x||^2 - int F(u0), K = ||u0_x||^2 - int f(u0) u0,
/// E = 1/2||u1||^2 + J. For the pure-power source these reduce to the usual
/// J = 1/2||u0_x||^2 - ||u0||_p^p / p and K = ||u0_x||^2 - ||u0||_p^p.
Functionals functionals(const DiscreteFn& u0, const DiscreteFn& u1, const ModelParams& params);

struct SobolevOptions {
    unsigned random_restarts = 8;
    std::uint64_t seed = 20240601;
    int max_iterations = 20000;
    // Stop when the ratio improves by less than this in one iteration.
    double tolerance = 1e-10;
    unsigned workers = 1;
};

struct SobolevResult {
    double B1;
    DiscreteFn maximizer;  // normalized to ||u_x||_2 = 1, u(L) > 0
    int iterations;        // of the winning start
    bool converged;        // false when some start hit max_iterations
};

/// Multi-start projected gradient ascent of ||u||_p / ||u_x||_2 on the
/// sphere ||u_x||_2 = 1, gradient taken in the H^1 metric.
SobolevResult sobolev_B1(const Grid& grid, double p, const SobolevOptions& options = {});

struct WellConstants {
    double p = 0.0;
    double B1 = 0.0;
    double K0 = 0.0;
    double lambda1 = 0.0;
    double E1 = 0.0;
    double d = std::numeric_limits<double>::quiet_NaN();
    std::optional<DiscreteFn> maximizer;
    bool converged = true;
};

/// K0, lambda1 and E1 from B1; d is left unset.
WellConstants well_constants(double B1, double p);

/// Both closed forms of lambda1, for cross-checking.
double lambda1_from_K0(double K0, double p);
double lambda1_from_B1(double B1, double p);

struct RayMax {
    double lambda_star;
    double J_max;
};

/// Maximum of lambda -> J(lambda u) for the pure-power functional.
RayMax ray_max(const DiscreteFn& u, double p);

/// J(u) = 1/2||u_x||^2 - ||u||_p^p / p.
double pure_power_J(const DiscreteFn& u, double p);

struct Depth {
    double d;
    bool converged;
};

/// Well depth through the Sobolev maximizer.
Depth depth_d(const Grid& grid, double p, const SobolevOptions& options = {});

/// B1, the derived constants and d in one pass.
WellConstants compute_well(const Grid& grid, double p, const SobolevOptions& options = {});

struct Classification {
    double K;
    double E;
    double grad_norm;
    bool in_W;
    bool in_Wu;
};

/// Requires the pure-power source and wc.d set.
Classification classify(const DiscreteFn& u0, const DiscreteFn& u1, const WellConstants& wc,
                        const ModelParams& params);

struct Region {
    double two_star;  // +inf for n <= 2
    bool p_admissible;
    double m0;
    bool old_thm;
    bool new_thm;
    bool open_zone;
};

/// Blow-up threshold of the earlier result: (2(n+1)p - 4(n-1)) / (n(p-2) + 4).
double m0_threshold(int n, double p);

Region region(int n, double p, double m);

}  // namespace blowup
