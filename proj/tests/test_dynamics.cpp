#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "blowup/dynamics.hpp"

using namespace blowup;

namespace {

ModelParams damped_linear() {
    ModelParams P;
    P.b = 0.0;
    P.m = 2.0;
    P.mu = 2.0;
    P.alpha = 1.0;
    return P;
}

DiscreteFn quarter_sine(const Grid& g) {
    return DiscreteFn::from(g, [](double x) { return std::sin(0.5 * std::numbers::pi * x); });
}

}  // namespace

TEST_CASE("energy plus discrete dissipation is conserved step by step") {
    ModelParams P;
    P.p = 3.0;
    P.m = 3.0;
    P.mu = 1.5;
    P.beta = 0.5;
    P.alpha = 2.0;
    const Grid g(1.0, 65);
    const DiscreteFn u0 = DiscreteFn::from(g, [](double x) { return 0.5 * std::sin(3 * x); });
    const DiscreteFn u1 = DiscreteFn::from(g, [](double x) { return x * (2 - x); });
    Simulator sim(P, State{0.0, u0, u1, 0.0}, Controls{});
    const double E0 = sim.measure().E;
    for (int k = 1; k <= 20; ++k) {
        sim.advance(0.1 * k, true);
        const Sample s = sim.measure();
        CHECK(std::abs(s.E + sim.discrete_dissipation() - E0) <= 1e-11 * s.energy_scale);
    }
    CHECK(sim.state().t == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(sim.state().u.pinned());
}

TEST_CASE("energy ledger residual is second order") {
    double prev = 0.0;
    for (std::size_t n : {65u, 129u, 257u}) {
        const Grid g(1.0, n);
        const Trajectory t = simulate(g, damped_linear(), quarter_sine(g), DiscreteFn(g), 2.0);
        CHECK(t.outcome == Outcome::global_to_horizon);
        const double r = energy_identity_residual(t);
        if (prev > 0.0) CHECK(prev / r >= 3.0);
        prev = r;
    }
}

TEST_CASE("conservative run keeps its energy") {
    const Preset pr = make_preset("conservative");
    const Trajectory t = simulate(pr.u0.grid(), pr.params, pr.u0, pr.u1, pr.horizon, pr.controls);
    const double E0 = t.samples.front().E;
    CHECK(E0 > 0.0);
    for (const Sample& s : t.samples) CHECK(std::abs(s.E - E0) <= 1e-6 * E0);
    CHECK(t.samples.back().D == 0.0);
}

TEST_CASE("energy never increases under damping") {
    const Grid g(1.0, 129);
    ModelParams P;
    P.m = 3.0;
    const DiscreteFn u0 = DiscreteFn::from(g, [](double x) { return 0.3 * x; });
    const Trajectory t = simulate(g, P, u0, DiscreteFn(g), 5.0);
    for (std::size_t k = 1; k < t.samples.size(); ++k) {
        CHECK(t.samples[k].E <= t.samples[k - 1].E + 1e-12 * t.samples[k - 1].energy_scale);
    }
}

TEST_CASE("blow-up preset") {
    const Preset pr = make_preset("blowup-demo");
    const Trajectory t = simulate(pr.u0.grid(), pr.params, pr.u0, pr.u1, pr.horizon, pr.controls);
    REQUIRE(t.outcome == Outcome::blowup_detected);
    REQUIRE(t.t_blow_bracket);
    CHECK(t.t_blow_bracket->first < t.t_blow_bracket->second);
    CHECK(t.t_blow_bracket->second < 5.0);
    CHECK(t.samples.back().u_inf > 1e8);
    CHECK(t.samples.front().E == doctest::Approx(-450.0).epsilon(1e-4));

    const WellConstants wc = compute_well(pr.u0.grid(), 4.0);
    const DiagnosticsReport rep = diagnostics(t, wc, default_E2(t.samples.front().E, wc.E1));
    CHECK(rep.H_monotone);
    CHECK(rep.data_in_W);
    CHECK(rep.grad_lower_bound_ok);
    CHECK(rep.p_norm_escape);
    CHECK(rep.z_defined);
    CHECK(rep.eta == 1.0 / 32.0);
    // u1 = 0, so the momentum term starts at zero.
    CHECK(rep.Z.front() == doctest::Approx(std::pow(rep.H.front(), 1.0 - rep.eta)).epsilon(1e-12));
    CHECK(rep.xi > 0.0);
}

TEST_CASE("small-data preset stays small") {
    const Preset pr = make_preset("small-data");
    const Trajectory t = simulate(pr.u0.grid(), pr.params, pr.u0, pr.u1, pr.horizon, pr.controls);
    CHECK(t.outcome == Outcome::global_to_horizon);
    CHECK(t.samples.back().t == doctest::Approx(50.0).epsilon(1e-12));
    for (const Sample& s : t.samples) CHECK(s.u_inf <= 2.0 * sup_norm(pr.u0));
}

TEST_CASE("eta and eta_bar") {
    CHECK(eta_bar(4.0, 2.0) == 0.125);
    CHECK(eta(4.0, 2.0) == 1.0 / 32.0);
    CHECK(eta_bar(4.0, 3.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(eta_bar(4.0, 3.5) < 0.0);
    CHECK(eta(10.0, 1.1) == eta_bar(10.0, 1.1) / 4.0);
    CHECK(eta(3.0, 1.05) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("E2 outside (E0, E1) is rejected") {
    const Preset pr = make_preset("blowup-demo");
    const Grid g(1.0, 33);
    const DiscreteFn u0 = DiscreteFn::from(g, [](double x) { return 10.0 * x; });
    const Trajectory t = simulate(g, pr.params, u0, DiscreteFn(g), 0.05);
    const WellConstants wc = compute_well(g, 4.0);
    CHECK_THROWS_AS(diagnostics(t, wc, wc.E1 + 1.0), std::invalid_argument);
    CHECK_THROWS_AS(diagnostics(t, wc, t.samples.front().E - 1.0), std::invalid_argument);
}

TEST_CASE("restart reproduces the uninterrupted run") {
    for (const std::string& name : preset_names()) {
        const Preset pr = make_preset(name);
        const double split = name == "blowup-demo" ? 0.1 : 0.37 * pr.horizon;
        const RestartReport r = restart_consistency(pr.u0.grid(), pr.params, pr.u0, pr.u1, split, pr.horizon);
        CHECK(r.difference <= 1e-12);
        CHECK(r.outcome_full == r.outcome_restarted);
        CHECK(r.t_end_full == r.t_end_restarted);
        CHECK(r.bracket_full == r.bracket_restarted);
    }
    const Preset pr = make_preset("small-data");
    const RestartReport zero = restart_consistency(pr.u0.grid(), pr.params, pr.u0, pr.u1, 0.0, pr.horizon);
    CHECK(zero.difference == 0.0);
}

TEST_CASE("trajectory serialization") {
    const Grid g(1.0, 17);
    const Trajectory t = simulate(g, damped_linear(), quarter_sine(g), DiscreteFn(g), 0.25);
    std::ostringstream csv, nd;
    write_csv(csv, t);
    write_ndjson(nd, t);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,E,lp_u,grad_u,l2_v,D,H,Z,u_inf");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == t.samples.size());
    const std::string first = nd.str().substr(0, nd.str().find('\n'));
    CHECK(first.rfind("{\"t\":0.0,", 0) == 0);
    CHECK(first.find("\"H\":null") != std::string::npos);
}

TEST_CASE("outcome names round-trip") {
    for (Outcome o : {Outcome::global_to_horizon, Outcome::blowup_detected, Outcome::inconclusive}) {
        CHECK(outcome_from_string(to_string(o)) == o);
    }
    CHECK_THROWS_AS(outcome_from_string("exploded"), std::invalid_argument);
    CHECK_THROWS_AS(make_preset("nope"), std::invalid_argument);
}

TEST_CASE("bad inputs") {
    const Grid g(1.0, 17);
    CHECK_THROWS_AS(simulate(g, damped_linear(), quarter_sine(g), DiscreteFn(g), 0.0), std::invalid_argument);
    const Grid other(1.0, 33);
    CHECK_THROWS_AS(simulate(g, damped_linear(), quarter_sine(other), DiscreteFn(other), 1.0), std::invalid_argument);
}
