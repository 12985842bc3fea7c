#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace blowup {

struct RootResult {
    double x;
    int iterations;
    bool converged;
};

/// Safeguarded Newton on a bracket [lo, hi] with g(lo) <= 0 <= g(hi).
/// `fdf(x)` returns {g(x), g'(x)}. A Newton iterate that leaves the current
/// bracket, or a non-finite derivative, falls back to bisection. Converges
/// when the step is below tol * max(1, |x|).
template <class Fdf>
RootResult newton_bisect(Fdf&& fdf, double lo, double hi, double tol = 1e-12, int max_iterations = 200) {
    if (lo > hi) std::swap(lo, hi);
    double x = 0.5 * (lo + hi);
    for (int it = 1; it <= max_iterations; ++it) {
        const auto [g, dg] = fdf(x);
        if (g == 0.0) return {x, it, true};
        if (g < 0.0) lo = x; else hi = x;

        double next = x - g / dg;
        if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
        const double step = std::abs(next - x);
        x = next;
        if (step <= tol * std::max(1.0, std::abs(x)) || hi - lo <= tol * std::max(1.0, std::abs(x))) {
            return {x, it, true};
        }
    }
    return {x, max_iterations, false};
}

}  // namespace blowup
