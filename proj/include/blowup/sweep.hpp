// Parallel sweeps over the (p, m) plane and the region chart.
#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "blowup/dynamics.hpp"
#include "blowup/model.hpp"

namespace blowup {

/// u0 for a named family, u1 = 0 is used alongside it.
///   ramp:   A x / L
///   sine:   A sin(pi x / (2L))
///   random: A times a seeded sine series scaled to sup norm 1
DiscreteFn initial_profile(const Grid& grid, const std::string& family, double amplitude, std::uint64_t seed);

std::vector<std::string> profile_families();

struct SweepConfig {
    std::vector<double> p_grid;
    std::vector<double> m_grid;
    int n = 1;
    std::size_t N = 65;
    double L = 1.0;
    ModelParams params;  // p, m and n are taken from the grids above
    std::string family = "ramp";
    double amplitude = 10.0;
    double horizon = 2.0;
    std::vector<std::uint64_t> seeds{1};
    unsigned workers = 1;
    Controls controls;
};

/// Throws std::invalid_argument on empty or non-increasing grids, p <= 2,
/// m <= 1, a non-pure-power source or an unknown family.
void validate(const SweepConfig& config);

struct SweepRow {
    int n;
    double p;
    double m;
    double mu;
    double alpha;
    double beta;
    std::uint64_t seed;
    std::size_t N;
    double E0;
    bool in_Wu;
    double m0;
    bool old_thm;
    bool new_thm;
    Outcome outcome;
    std::optional<double> t_blow_lo;
    std::optional<double> t_blow_hi;
    double u_inf_max;
};

/// Rows in (p, m, seed) order whatever the worker count.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

inline constexpr const char* kSweepHeader =
    "n,p,m,mu,alpha,beta,seed,N,E0,in_Wu,m0,old_thm,new_thm,outcome,t_blow_lo,t_blow_hi,u_inf_max";

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

/// Unstable-set data inside the new blow-up range that did not blow up.
bool is_counterexample(const SweepRow& row);

/// More than half of the rows are inconclusive.
bool inconclusive_dominated(const std::vector<SweepRow>& rows);

struct ChartConfig {
    int n = 1;
    double p_min = 2.0;
    double p_max = 10.0;
    std::vector<SweepRow> markers;
};

/// Self-contained SVG of m0(p), 1 + p/2 and m = p over (p_min, p_max], the
/// shaded theorem regions, the admissibility cutoff for n >= 3 and any sweep
/// markers. Throws std::invalid_argument on an empty range or p_min < 2.
std::string emit_region_chart(const ChartConfig& config);

}  // namespace blowup
