// Time integration of the 1-D damped wave problem with an energy ledger.
//
// Space: lumped P1 / ghost-point finite differences on a uniform grid,
//     M u'' = -K u + M f(u) - e_L Q(u_L'),
// with trapezoid masses M and the clamped node removed. The discrete energy
//     E = 1/2 v^T M v + 1/2 u^T K u - sum_i M_i F(u_i)
// satisfies dE/dt = -Q(v_L) v_L.
//
// Time: implicit midpoint with the nodal discrete gradient
//     fbar(a, b) = (F(b) - F(a)) / (b - a)
// for the source and the damping evaluated at the midpoint velocity
// vbar = (u' - u)/dt. One step then obeys E' - E = -dt Q(vbar_L) vbar_L
// to rounding. Each step is a Newton iteration; the linearized interior rows
// are eliminated (Thomas) down to a single monotone scalar equation for the
// boundary velocity, solved by safeguarded Newton with bisection fallback.
//
// The step size starts at dt0 and is halved (never increased) whenever the
// sup norm would grow by more than the trigger fraction in one step.
#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "blowup/grid1d.hpp"
#include "blowup/model.hpp"
#include "blowup/potential_well.hpp"

namespace blowup {

struct Controls {
    double dt0 = 0.0;              // <= 0 means cfl * h
    double cfl = 0.5;
    double growth_trigger = 0.10;  // halve dt when ||u||_inf grows by more than this fraction
    double growth_floor = 1.0;     // growth is measured relative to max(||u||_inf, floor)
    double u_max = 1e8;
    double dt_min = 1e-12;
    std::size_t growth_window = 20;
    std::size_t sample_stride = 1;
    double newton_tol = 1e-12;
    int max_newton = 60;
    std::size_t max_steps = 20'000'000;
};

struct State {
    double t = 0.0;
    DiscreteFn u;
    DiscreteFn v;
    double dt = 0.0;
};

enum class Outcome { global_to_horizon, blowup_detected, inconclusive };

const char* to_string(Outcome o);
Outcome outcome_from_string(const std::string& s);

struct Sample {
    double t;
    double E;
    double lp_u;
    double grad_u;
    double l2_v;
    double D;  // cumulative boundary dissipation
    double H = std::numeric_limits<double>::quiet_NaN();
    double Z = std::numeric_limits<double>::quiet_NaN();
    double u_inf;
    double l2_u;
    double u_dot_v;       // int u u_t
    double energy_scale;  // 1/2||v||^2 + 1/2||u_x||^2 + int |F(u)|
    double dt;
};

struct Trajectory {
    ModelParams params;
    double h = 0.0;
    double dt0 = 0.0;
    std::vector<Sample> samples;
    Outcome outcome = Outcome::inconclusive;
    std::optional<std::pair<double, double>> t_blow_bracket;
    std::string diagnostic;
    std::optional<State> final_state;
    std::size_t steps = 0;
    std::size_t rejected_steps = 0;
};

/// Stepper that can stop and resume without changing the step schedule.
class Simulator {
public:
    Simulator(const ModelParams& params, State initial, const Controls& controls);

    /// Advance until t >= target. With clip the last step lands on target.
    /// Returns false once the run has terminated (blow-up or failure).
    bool advance(double target, bool clip);

    const State& state() const { return state_; }
    /// Trapezoid-in-time integral of Q(v_L) v_L over the accepted steps.
    double dissipation() const { return dissipation_; }
    /// Sum of the per-step discrete dissipation dt Q(vbar_L) vbar_L.
    double discrete_dissipation() const { return discrete_dissipation_; }
    bool terminated() const { return outcome_.has_value(); }
    std::optional<Outcome> outcome() const { return outcome_; }
    const std::optional<std::pair<double, double>>& bracket() const { return bracket_; }
    const std::string& diagnostic() const { return diagnostic_; }
    const std::vector<Sample>& samples() const { return samples_; }
    std::size_t steps() const { return steps_; }
    std::size_t rejected_steps() const { return rejected_; }

    Sample measure() const;

private:
    bool try_step(double dt, DiscreteFn& u_new, DiscreteFn& v_new, double& dissipated, std::string& why) const;
    bool superlinear_growth() const;
    void record();

    ModelParams params_;
    Controls controls_;
    Grid grid_;
    State state_;
    double dissipation_ = 0.0;
    double discrete_dissipation_ = 0.0;
    std::optional<Outcome> outcome_;
    std::optional<std::pair<double, double>> bracket_;
    std::string diagnostic_;
    std::vector<Sample> samples_;
    std::vector<std::pair<double, double>> history_;  // (t, ||u||_inf) of accepted steps
    std::size_t steps_ = 0;
    std::size_t rejected_ = 0;
};

/// CSV with header t,E,lp_u,grad_u,l2_v,D,H,Z,u_inf.
void write_csv(std::ostream& os, const Trajectory& traj);
/// One JSON object per sample; NaN becomes null.
void write_ndjson(std::ostream& os, const Trajectory& traj);

/// Run from (u0, u1) to the horizon or until blow-up is detected.
Trajectory simulate(const Grid& grid, const ModelParams& params, const DiscreteFn& u0, const DiscreteFn& u1,
                    double horizon, const Controls& controls = {});

/// max over sample pairs |E(t) - E(s) + D(t) - D(s)|.
double energy_identity_residual(const Trajectory& traj);

/// -(1/p)(1 - 1/m - p/(2m)); positive exactly when m < 1 + p/2.
double eta_bar(double p, double m);
/// min{eta_bar/4, (p-2)/(4p)}.
double eta(double p, double m);

struct DiagnosticsReport {
    double E0 = 0.0;
    double E2 = 0.0;
    bool z_defined = false;  // E0 < E1 and m < 1 + p/2
    double eta = std::numeric_limits<double>::quiet_NaN();
    double xi = std::numeric_limits<double>::quiet_NaN();
    bool H_monotone = false;
    double Z_monotone_fraction = std::numeric_limits<double>::quiet_NaN();
    bool data_in_W = false;
    bool grad_lower_bound_ok = false;
    bool p_norm_escape = false;
    std::vector<double> H;
    std::vector<double> Z;
};

/// Default E2 = E0 + 0.9 (E1 - E0) when E0 < E1.
double default_E2(double E0, double E1);

/// Throws std::invalid_argument when E0 < E1 and E2 is outside (E0, E1).
/// The H monotonicity slack at sample k is h_slack * energy_scale_k.
DiagnosticsReport diagnostics(const Trajectory& traj, const WellConstants& wc, double E2,
                              double h_slack = 1e-10);

/// Copy H and Z from a report into the trajectory samples.
void attach(Trajectory& traj, const DiagnosticsReport& report);

struct RestartReport {
    double difference = 0.0;  // max nodal |u_full - u_restarted| at the end
    Outcome outcome_full = Outcome::inconclusive;
    Outcome outcome_restarted = Outcome::inconclusive;
    std::optional<std::pair<double, double>> bracket_full;
    std::optional<std::pair<double, double>> bracket_restarted;
    double t_end_full = 0.0;
    double t_end_restarted = 0.0;
};

/// Full run vs. a run stopped at the first step past t_split and resumed
/// from its stored state. t_split <= 0 returns a zero report.
RestartReport restart_consistency(const Grid& grid, const ModelParams& params, const DiscreteFn& u0,
                                  const DiscreteFn& u1, double t_split, double horizon,
                                  const Controls& controls = {});

struct Preset {
    std::string name;
    ModelParams params;
    double length;
    std::size_t nodes;
    double horizon;
    Controls controls;
    DiscreteFn u0;
    DiscreteFn u1;
};

/// "blowup-demo", "small-data" or "conservative".
Preset make_preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace blowup
