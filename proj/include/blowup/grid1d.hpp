// Uniform 1-D mesh on (0, L) with discrete norms and trapezoidal quadrature.
//
// Node 0 is the clamped end (u = 0), node N-1 is the damped end. Every
// integral in the library goes through the same trapezoid weights so that
// the discrete energy and the discrete integration-by-parts identity match.
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace blowup {

class Grid {
public:
    Grid(double length, std::size_t nodes);

    double length() const { return length_; }
    std::size_t nodes() const { return nodes_; }
    double spacing() const { return spacing_; }
    std::size_t last() const { return nodes_ - 1; }

    double x(std::size_t i) const { return spacing_ * static_cast<double>(i); }

    /// Trapezoid weight of node i (h/2 at the ends, h inside).
    double weight(std::size_t i) const {
        return (i == 0 || i == last()) ? 0.5 * spacing_ : spacing_;
    }

    bool operator==(const Grid&) const = default;

private:
    double length_;
    std::size_t nodes_;
    double spacing_;
};

Grid make_grid(double length, std::size_t nodes);

/// Nodal values on a grid. When used as an element of H^1 vanishing at
/// x = 0, value(0) is held at zero by the producers in this library.
class DiscreteFn {
public:
    explicit DiscreteFn(const Grid& grid);
    DiscreteFn(const Grid& grid, std::vector<double> values);

    static DiscreteFn from(const Grid& grid, const std::function<double(double)>& f);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    double boundary_value() const { return values_.back(); }

    /// True when value(0) == 0 and every entry is finite.
    bool pinned() const;
    bool finite() const;

    DiscreteFn& operator*=(double c);
    friend DiscreteFn operator*(double c, DiscreteFn u) { return u *= c; }

private:
    Grid grid_;
    std::vector<double> values_;
};

struct Norms {
    double lp;
    double h1_semi;
    double trace_gamma1;
};

/// Trapezoidal L^p norm, forward-difference H^1 seminorm, and |u(L)|.
Norms norms(const DiscreteFn& u, double p);

double lp_norm(const DiscreteFn& u, double p);
/// Trapezoidal integral of |u|^p (the p-th power of lp_norm).
double lp_power(const DiscreteFn& u, double p);
double grad_norm(const DiscreteFn& u);
double sup_norm(const DiscreteFn& u);

/// Trapezoidal integral of u*v.
double inner(const DiscreteFn& u, const DiscreteFn& v);

/// Throws std::invalid_argument when the two functions live on different grids.
void require_same_grid(const DiscreteFn& u, const DiscreteFn& v);

}  // namespace blowup
