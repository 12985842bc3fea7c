#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "blowup/grid1d.hpp"

using namespace blowup;

TEST_CASE("spacing") {
    CHECK(make_grid(1.0, 5).spacing() == 0.25);
    CHECK(make_grid(2.0, 3).spacing() == 1.0);
    CHECK_THROWS_AS(make_grid(1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(std::numeric_limits<double>::infinity(), 9), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(std::nan(""), 9), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(-1.0, 9), std::invalid_argument);

    for (std::size_t n : {3u, 7u, 100u, 1025u}) {
        const Grid g(3.7, n);
        CHECK(g.spacing() * static_cast<double>(n - 1) == doctest::Approx(3.7).epsilon(1e-15));
        CHECK(g.x(g.last()) == doctest::Approx(3.7).epsilon(1e-15));
    }
}

TEST_CASE("trapezoid weights sum to the length") {
    const Grid g(2.5, 41);
    double s = 0.0;
    for (std::size_t i = 0; i < g.nodes(); ++i) s += g.weight(i);
    CHECK(s == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("zero function") {
    const Grid g(1.0, 17);
    const Norms z = norms(DiscreteFn(g), 4.0);
    CHECK(z.lp == 0.0);
    CHECK(z.h1_semi == 0.0);
    CHECK(z.trace_gamma1 == 0.0);
}

TEST_CASE("norms of u = x") {
    for (std::size_t n : {3u, 5u, 33u, 257u, 4097u}) {
        const Grid g(1.0, n);
        const DiscreteFn u = DiscreteFn::from(g, [](double x) { return x; });
        const Norms nm = norms(u, 4.0);
        CHECK(nm.h1_semi == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(nm.trace_gamma1 == 1.0);
    }
    const Grid fine(1.0, 4097);
    const DiscreteFn u = DiscreteFn::from(fine, [](double x) { return x; });
    CHECK(lp_norm(u, 4.0) == doctest::Approx(std::pow(0.2, 0.25)).epsilon(1e-6));
    CHECK(lp_norm(u, 2.0) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-6));
}

TEST_CASE("trapezoid lp error drops by 3.5x per halving") {
    // int_0^1 sin(x)^4 dx in closed form.
    const double exact = 3.0 / 8.0 - std::sin(2.0) / 4.0 + std::sin(4.0) / 32.0;
    double prev = 0.0;
    for (std::size_t n : {17u, 33u, 65u, 129u, 257u}) {
        const Grid g(1.0, n);
        const DiscreteFn u = DiscreteFn::from(g, [](double x) { return std::sin(x); });
        const double err = std::abs(lp_power(u, 4.0) - exact);
        if (prev > 0.0) CHECK(prev / err >= 3.5);
        prev = err;
    }
}

TEST_CASE("homogeneity") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> val(-3.0, 3.0);
    const Grid g(1.3, 65);
    for (int trial = 0; trial < 50; ++trial) {
        DiscreteFn u(g);
        for (std::size_t i = 1; i < g.nodes(); ++i) u[i] = val(rng);
        const double c = val(rng);
        for (double p : {1.5, 2.0, 4.0, 7.0}) {
            CHECK(lp_norm(c * u, p) == doctest::Approx(std::abs(c) * lp_norm(u, p)).epsilon(1e-13));
        }
        CHECK(grad_norm(c * u) == doctest::Approx(std::abs(c) * grad_norm(u)).epsilon(1e-13));
        CHECK(sup_norm(c * u) == doctest::Approx(std::abs(c) * sup_norm(u)).epsilon(1e-15));
    }
}

TEST_CASE("mismatched grids") {
    const DiscreteFn a(Grid(1.0, 9));
    const DiscreteFn b(Grid(1.0, 17));
    CHECK_THROWS_AS(inner(a, b), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteFn(Grid(1.0, 9), std::vector<double>(5, 0.0)), std::invalid_argument);
}

TEST_CASE("pinning and finiteness") {
    const Grid g(1.0, 9);
    DiscreteFn u = DiscreteFn::from(g, [](double x) { return x * x; });
    CHECK(u.pinned());
    u[0] = 1e-3;
    CHECK_FALSE(u.pinned());
    u[0] = 0.0;
    u[4] = std::nan("");
    CHECK_FALSE(u.finite());
}
