// Boundary trace estimate
//
//     |u(L)|^m <= C1 ||u||_p^{m-1} ||u_x||_2,    u(0) = 0,
//
// with C1 = ||w||_inf |Omega|^{1-m/p} B1 + m ||w_x||_inf |Omega|^{1/2-(m-1)/p},
// where w solves -w'' + w = 0 with unit outward flux at both ends.
#pragma once

#include <cstdint>
#include <string>

#include "blowup/grid1d.hpp"

namespace blowup {

struct AuxSolution {
    DiscreteFn w;
    double w_inf;
    double dw_inf;
};

/// Lumped P1 system for -w'' + w = 0, -w'(0) = 1, w'(L) = 1. The boundary
/// integral of the weak form is the sum of the two endpoint values.
AuxSolution solve_aux_neumann(const Grid& grid);

/// w(x) = A cosh x - sinh x, A = (1 + cosh L) / sinh L.
double aux_exact(double x, double length);

/// Requires p > 2 and 1 < m <= 1 + p/2.
double constant_C1(const AuxSolution& aux, double p, double m, double omega_measure, double B1);

enum class TraceFamily { white_noise, sine_series, spike };

const char* to_string(TraceFamily f);

struct TraceReport {
    std::int64_t samples = 0;
    std::int64_t skipped = 0;  // u == 0
    std::int64_t violations = 0;
    double worst_ratio = 0.0;
    TraceFamily worst_family = TraceFamily::white_noise;
    double slack = 0.0;  // a violation is ratio > 1 + slack
    double p = 0.0;
    double m = 0.0;
    double C1 = 0.0;
    std::size_t nodes = 0;
    std::uint64_t seed = 0;
};

/// ratio = |u(L)|^m / (C1 ||u||_p^{m-1} ||u_x||_2) for one function.
double trace_ratio(const DiscreteFn& u, double p, double m, double C1);

/// Seeded draw of sample `index`; the family cycles with the index.
DiscreteFn trace_sample(const Grid& grid, std::uint64_t seed, std::uint64_t index, TraceFamily& family);

/// Stress test over sample_count draws, counting ratio > 1 + 10 h^2.
TraceReport verify_trace_inequality(const Grid& grid, double p, double m, double C1, std::int64_t sample_count,
                                    std::uint64_t seed, unsigned workers = 1);

std::string to_json(const TraceReport& report);

}  // namespace blowup
