#include "blowup/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "blowup/root_solve.hpp"

namespace blowup {

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::global_to_horizon: return "global_to_horizon";
        case Outcome::blowup_detected: return "blowup_detected";
        case Outcome::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

Outcome outcome_from_string(const std::string& s) {
    if (s == "global_to_horizon") return Outcome::global_to_horizon;
    if (s == "blowup_detected") return Outcome::blowup_detected;
    if (s == "inconclusive") return Outcome::inconclusive;
    throw std::invalid_argument("unknown outcome '" + s + "'");
}

namespace {

double resolved_dt0(const Controls& c, double h) { return c.dt0 > 0.0 ? c.dt0 : c.cfl * h; }

}  // namespace

Simulator::Simulator(const ModelParams& params, State initial, const Controls& controls)
    : params_(params), controls_(controls), grid_(initial.u.grid()), state_(std::move(initial)) {
    validate(params_);
    normalize_damping(params_, true);
    require_same_grid(state_.u, state_.v);
    if (!state_.u.pinned()) throw std::invalid_argument("initial displacement must vanish at x = 0 and be finite");
    if (!state_.v.finite()) throw std::invalid_argument("initial velocity must be finite");
    state_.v[0] = 0.0;
    const double dt0 = resolved_dt0(controls_, grid_.spacing());
    if (!(dt0 > 0.0) || !std::isfinite(dt0)) throw std::invalid_argument("time step must be positive");
    state_.dt = state_.dt > 0.0 ? std::min(state_.dt, dt0) : dt0;
    controls_.sample_stride = std::max<std::size_t>(1, controls_.sample_stride);
    record();
}

namespace {

// Discrete gradient of F between a and b, and its derivative in b.
std::pair<double, double> source_gradient(const ModelParams& params, double a, double b) {
    const double diff = b - a;
    if (diff == 0.0) return {eval_source(params, a).f, 0.5 * source_derivative(params, a)};
    const SourceValue sb = eval_source(params, b);
    const double fbar = (sb.F - eval_source(params, a).F) / diff;
    const double dfbar = std::abs(diff) > 1e-4 * (std::abs(a) + std::abs(b))
                             ? (sb.f - fbar) / diff
                             : 0.5 * source_derivative(params, 0.5 * (a + b));
    return {fbar, dfbar};
}

}  // namespace

bool Simulator::try_step(double dt, DiscreteFn& u_new, DiscreteFn& v_new, double& dissipated,
                         std::string& why) const {
    const std::size_t last = grid_.last();
    const double h = grid_.spacing();
    const double off = -0.5 / h;  // off-diagonal of K/2
    const DiscreteFn& u = state_.u;
    const DiscreteFn& v = state_.v;

    // Newton iterate for u', nodes 1..last; node 0 stays clamped.
    std::vector<double> x(last + 1, 0.0), y(last + 1, 0.0), cp(last + 1, 0.0), dp(last + 1, 0.0);
    for (std::size_t i = 1; i <= last; ++i) x[i] = u[i] + dt * v[i];

    const double inertia = 2.0 / (dt * dt);
    double vbar = 0.0;
    bool converged = false;
    int polish = 1;
    for (int iter = 0; iter < controls_.max_newton; ++iter) {
        // Forward sweep over the interior rows 1..last-1 of J y = J x - R.
        for (std::size_t i = 1; i < last; ++i) {
            const double wi = grid_.weight(i);
            const auto [fbar, dfbar] = source_gradient(params_, u[i], x[i]);
            const double ku = (2.0 * (u[i] + x[i]) - (u[i - 1] + x[i - 1]) - (u[i + 1] + x[i + 1])) / (2.0 * h);
            const double residual = wi * inertia * (x[i] - u[i] - dt * v[i]) + ku - wi * fbar;
            const double diag = wi * inertia + 1.0 / h - wi * dfbar;
            const double rhs = diag * x[i] + off * (x[i - 1] + x[i + 1]) - residual;
            const double denom = diag - (i > 1 ? off * cp[i - 1] : 0.0);
            cp[i] = off / denom;
            dp[i] = (rhs - (i > 1 ? off * dp[i - 1] : 0.0)) / denom;
        }

        // Boundary row without the damping term, linearized in y.
        const double wl = grid_.weight(last);
        const auto [fbar, dfbar] = source_gradient(params_, u[last], x[last]);
        const double ku = ((u[last] + x[last]) - (u[last - 1] + x[last - 1])) / (2.0 * h);
        const double residual = wl * inertia * (x[last] - u[last] - dt * v[last]) + ku - wl * fbar;
        const double diag = wl * inertia + 0.5 / h - wl * dfbar;
        const double c0 = residual - diag * x[last] - off * x[last - 1];
        // Substitute y[last-1] = dp - cp * y[last]: schur * y[last] + c1 + Q(vbar) = 0.
        const double schur = diag - off * cp[last - 1];
        const double c1 = off * dp[last - 1] + c0;
        if (!(schur > 0.0) || !std::isfinite(schur) || !std::isfinite(c1)) {
            why = "step too large for the implicit solve";
            return false;
        }
        // In terms of vbar = (y[last] - u[last]) / dt:  schur dt vbar + Q(vbar) = r.
        const double r = -(schur * u[last] + c1);
        const double lin = schur * dt;
        if (params_.alpha == 0.0) {
            vbar = r / lin;
        } else {
            auto fdf = [&](double s) {
                return std::pair{lin * s + eval_damping(params_, s).Q - r,
                                 lin + std::min(damping_derivative(params_, s), 1e300)};
            };
            const double guess = r / lin;
            const RootResult root =
                newton_bisect(fdf, std::min(0.0, guess), std::max(0.0, guess), controls_.newton_tol);
            if (!root.converged) {
                why = "boundary velocity solve did not converge";
                return false;
            }
            vbar = root.x;
        }
        y[last] = u[last] + dt * vbar;
        for (std::size_t i = last - 1; i >= 1; --i) y[i] = dp[i] - cp[i] * y[i + 1];

        double delta = 0.0, size = 0.0;
        for (std::size_t i = 1; i <= last; ++i) {
            delta = std::max(delta, std::abs(y[i] - x[i]));
            size = std::max(size, std::abs(y[i]));
        }
        x.swap(y);
        if (!std::isfinite(delta)) {
            why = "non-finite Newton iterate";
            return false;
        }
        if (converged) {
            if (--polish < 0) break;
        } else if (delta <= controls_.newton_tol * std::max(size, std::abs(dt * vbar))) {
            converged = true;
            if (polish == 0) break;
        }
    }
    if (!converged) {
        why = "Newton iteration did not converge";
        return false;
    }

    u_new[0] = 0.0;
    v_new[0] = 0.0;
    for (std::size_t i = 1; i <= last; ++i) {
        u_new[i] = x[i];
        v_new[i] = 2.0 * (x[i] - u[i]) / dt - v[i];
    }
    vbar = (x[last] - u[last]) / dt;
    dissipated = dt * eval_damping(params_, vbar).Qv;
    if (!u_new.finite() || !v_new.finite()) {
        why = "non-finite state";
        return false;
    }
    return true;
}

bool Simulator::superlinear_growth() const {
    const std::size_t window = std::max<std::size_t>(controls_.growth_window, 3);
    if (history_.size() < window) return false;
    const auto first = history_.end() - static_cast<std::ptrdiff_t>(window);
    for (auto it = first + 1; it != history_.end(); ++it) {
        if (!(it->second > (it - 1)->second)) return false;
    }
    const auto mid = first + static_cast<std::ptrdiff_t>(window / 2);
    const auto& lastp = history_.back();
    if (first->second <= 0.0) return false;
    const double r1 = std::log(mid->second / first->second) / (mid->first - first->first);
    const double r2 = std::log(lastp.second / mid->second) / (lastp.first - mid->first);
    return r1 > 0.0 && r2 > r1;
}

Sample Simulator::measure() const {
    const DiscreteFn& u = state_.u;
    const DiscreteFn& v = state_.v;
    double kinetic = 0.0, potential = 0.0, abs_potential = 0.0, uv = 0.0, uu = 0.0;
    for (std::size_t i = 0; i < grid_.nodes(); ++i) {
        const double wi = grid_.weight(i);
        const double F = eval_source(params_, u[i]).F;
        kinetic += wi * v[i] * v[i];
        potential += wi * F;
        abs_potential += wi * std::abs(F);
        uv += wi * u[i] * v[i];
        uu += wi * u[i] * u[i];
    }
    const double gn = grad_norm(u);
    Sample s;
    s.t = state_.t;
    s.E = 0.5 * kinetic + 0.5 * gn * gn - potential;
    s.lp_u = lp_norm(u, params_.p);
    s.grad_u = gn;
    s.l2_v = std::sqrt(kinetic);
    s.D = dissipation_;
    s.u_inf = sup_norm(u);
    s.l2_u = std::sqrt(uu);
    s.u_dot_v = uv;
    s.energy_scale = 0.5 * kinetic + 0.5 * gn * gn + abs_potential;
    s.dt = state_.dt;
    return s;
}

void Simulator::record() { samples_.push_back(measure()); }

bool Simulator::advance(double target, bool clip) {
    const std::size_t n = grid_.nodes();
    DiscreteFn u_new(grid_), v_new(grid_);
    std::string why;
    double dissipated = 0.0;
    while (!terminated() && state_.t < target) {
        if (steps_ >= controls_.max_steps) {
            outcome_ = Outcome::inconclusive;
            diagnostic_ = "step budget exhausted at t=" + std::to_string(state_.t);
            record();
            return false;
        }
        double dt_ctrl = state_.dt;
        double dt_step = 0.0;
        bool landed = false;
        const double u_inf_old = sup_norm(state_.u);
        const double growth_cap = (1.0 + controls_.growth_trigger) * std::max(u_inf_old, controls_.growth_floor);
        for (;;) {
            const double remaining = target - state_.t;
            landed = clip && dt_ctrl >= remaining;
            dt_step = landed ? remaining : dt_ctrl;
            bool ok = try_step(dt_step, u_new, v_new, dissipated, why);
            if (ok && sup_norm(u_new) > growth_cap) {
                ok = false;
                why = "growth trigger";
            }
            if (ok) break;
            ++rejected_;
            dt_ctrl *= 0.5;
            if (dt_ctrl < controls_.dt_min) {
                std::ostringstream msg;
                msg << "time step underflow at t=" << state_.t << " (last rejection: " << why
                    << ", |u|_inf=" << u_inf_old << ")";
                if (superlinear_growth()) {
                    outcome_ = Outcome::blowup_detected;
                    bracket_ = std::pair{state_.t, state_.t + 2.0 * dt_ctrl};
                } else {
                    outcome_ = Outcome::inconclusive;
                }
                diagnostic_ = msg.str();
                if (samples_.back().t != state_.t) record();
                return false;
            }
        }

        const double qv_old = eval_damping(params_, state_.v[n - 1]).Qv;
        const double qv_new = eval_damping(params_, v_new[n - 1]).Qv;
        dissipation_ += 0.5 * dt_step * (qv_old + qv_new);
        discrete_dissipation_ += dissipated;

        const double t_prev = state_.t;
        std::swap(state_.u, u_new);
        std::swap(state_.v, v_new);
        state_.t = landed ? target : state_.t + dt_step;
        state_.dt = dt_ctrl;
        ++steps_;

        const double u_inf = sup_norm(state_.u);
        history_.emplace_back(state_.t, u_inf);
        if (history_.size() > 4 * controls_.growth_window + 4) {
            history_.erase(history_.begin(), history_.end() - static_cast<std::ptrdiff_t>(controls_.growth_window));
        }

        const bool detected = u_inf > controls_.u_max;
        if (steps_ % controls_.sample_stride == 0 || state_.t >= target || detected) record();
        if (detected) {
            outcome_ = Outcome::blowup_detected;
            bracket_ = std::pair{t_prev, state_.t};
            diagnostic_ = "sup norm exceeded threshold";
            return false;
        }
    }
    return !terminated();
}

Trajectory simulate(const Grid& grid, const ModelParams& params, const DiscreteFn& u0, const DiscreteFn& u1,
                    double horizon, const Controls& controls) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("horizon must be positive");
    if (!(u0.grid() == grid)) throw std::invalid_argument("initial data live on a different grid");
    Simulator sim(params, State{0.0, u0, u1, 0.0}, controls);
    sim.advance(horizon, true);

    Trajectory traj;
    traj.params = params;
    traj.h = grid.spacing();
    traj.dt0 = resolved_dt0(controls, grid.spacing());
    traj.samples = sim.samples();
    traj.outcome = sim.outcome().value_or(Outcome::global_to_horizon);
    traj.t_blow_bracket = sim.bracket();
    traj.diagnostic = sim.diagnostic();
    traj.final_state = sim.state();
    traj.steps = sim.steps();
    traj.rejected_steps = sim.rejected_steps();
    return traj;
}

double energy_identity_residual(const Trajectory& traj) {
    if (traj.samples.size() < 2) return 0.0;
    double lo = traj.samples.front().E + traj.samples.front().D;
    double hi = lo;
    for (const Sample& s : traj.samples) {
        lo = std::min(lo, s.E + s.D);
        hi = std::max(hi, s.E + s.D);
    }
    return hi - lo;
}

double eta_bar(double p, double m) { return -(1.0 / p) * (1.0 - 1.0 / m - p / (2.0 * m)); }

double eta(double p, double m) { return std::min(eta_bar(p, m) / 4.0, (p - 2.0) / (4.0 * p)); }

double default_E2(double E0, double E1) { return E0 + 0.9 * (E1 - E0); }

DiagnosticsReport diagnostics(const Trajectory& traj, const WellConstants& wc, double E2, double h_slack) {
    if (traj.samples.empty()) throw std::invalid_argument("diagnostics need at least one sample");
    const auto& s = traj.samples;
    DiagnosticsReport r;
    r.E0 = s.front().E;
    r.E2 = E2;
    const bool below = r.E0 < wc.E1;
    if (below && !(E2 > r.E0 && E2 < wc.E1)) {
        throw std::invalid_argument("E2 must lie in (E(0), E1)");
    }

    r.H.resize(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) r.H[k] = E2 - s[k].E;
    r.H_monotone = true;
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        const double slack = h_slack * std::max(s[k].energy_scale, s[k + 1].energy_scale);
        if (r.H[k + 1] < r.H[k] - slack) {
            r.H_monotone = false;
            break;
        }
    }

    const double p = traj.params.p;
    const double m = traj.params.m;
    r.z_defined = below && eta_bar(p, m) > 0.0 && r.H.front() > 0.0;
    r.Z.assign(s.size(), std::numeric_limits<double>::quiet_NaN());
    if (r.z_defined) {
        r.eta = eta(p, m);
        const double head = std::pow(r.H.front(), 1.0 - r.eta);
        const double scale = std::max({std::abs(s.front().u_dot_v), s.front().l2_u * s.front().l2_u, 1e-300});
        r.xi = 0.5 * head / scale;
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (r.H[k] > 0.0) r.Z[k] = std::pow(r.H[k], 1.0 - r.eta) + r.xi * s[k].u_dot_v;
        }
        std::size_t up = 0;
        for (std::size_t k = 0; k + 1 < s.size(); ++k) up += r.Z[k + 1] >= r.Z[k] ? 1 : 0;
        r.Z_monotone_fraction = s.size() > 1 ? static_cast<double>(up) / static_cast<double>(s.size() - 1) : 1.0;
    }

    r.data_in_W = below && s.front().grad_u > wc.lambda1;
    r.grad_lower_bound_ok = true;
    if (r.data_in_W) {
        for (const Sample& x : s) r.grad_lower_bound_ok = r.grad_lower_bound_ok && x.grad_u > wc.lambda1;
    }
    r.p_norm_escape = traj.outcome == Outcome::blowup_detected && s.back().lp_u >= 1e3 * s.front().lp_u &&
                      s.back().grad_u >= 1e3 * s.front().grad_u;
    return r;
}

void attach(Trajectory& traj, const DiagnosticsReport& report) {
    for (std::size_t k = 0; k < traj.samples.size() && k < report.H.size(); ++k) {
        traj.samples[k].H = report.H[k];
        traj.samples[k].Z = report.Z[k];
    }
}

RestartReport restart_consistency(const Grid& grid, const ModelParams& params, const DiscreteFn& u0,
                                  const DiscreteFn& u1, double t_split, double horizon, const Controls& controls) {
    RestartReport r;
    if (!(u0.grid() == grid)) throw std::invalid_argument("initial data live on a different grid");
    if (t_split <= 0.0) return r;
    if (!(t_split < horizon)) throw std::invalid_argument("restart split must lie before the horizon");

    Simulator full(params, State{0.0, u0, u1, 0.0}, controls);
    full.advance(horizon, true);

    Simulator first(params, State{0.0, u0, u1, 0.0}, controls);
    first.advance(t_split, false);
    const Simulator* finished = &first;
    std::optional<Simulator> resumed;
    if (!first.terminated()) {
        resumed.emplace(params, first.state(), controls);
        resumed->advance(horizon, true);
        finished = &*resumed;
    }

    const DiscreteFn& a = full.state().u;
    const DiscreteFn& b = finished->state().u;
    for (std::size_t i = 0; i < a.size(); ++i) r.difference = std::max(r.difference, std::abs(a[i] - b[i]));
    r.outcome_full = full.outcome().value_or(Outcome::global_to_horizon);
    r.outcome_restarted = finished->outcome().value_or(Outcome::global_to_horizon);
    r.bracket_full = full.bracket();
    r.bracket_restarted = finished->bracket();
    r.t_end_full = full.state().t;
    r.t_end_restarted = finished->state().t;
    return r;
}

std::vector<std::string> preset_names() { return {"blowup-demo", "small-data", "conservative"}; }

Preset make_preset(const std::string& name) {
    const Grid grid(1.0, 257);
    ModelParams params;
    params.p = 4.0;
    params.m = 2.0;
    params.mu = 2.0;
    params.alpha = 1.0;
    params.beta = 0.0;
    params.a = 0.0;
    params.b = 1.0;
    params.n = 1;
    const DiscreteFn zero(grid);
    if (name == "blowup-demo") {
        return {name, params, 1.0, 257, 5.0, Controls{}, DiscreteFn::from(grid, [](double x) { return 10.0 * x; }), zero};
    }
    if (name == "small-data") {
        return {name, params, 1.0, 257, 50.0, Controls{}, DiscreteFn::from(grid, [](double x) { return 0.01 * x; }), zero};
    }
    if (name == "conservative") {
        params.alpha = 0.0;
        params.b = 0.0;
        return {name, params, 1.0, 257, 10.0, Controls{},
                DiscreteFn::from(grid, [](double x) { return std::sin(0.5 * std::numbers::pi * x); }), zero};
    }
    throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace blowup
