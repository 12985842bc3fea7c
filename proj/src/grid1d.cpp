#include "blowup/grid1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace blowup {

Grid::Grid(double length, std::size_t nodes) : length_(length), nodes_(nodes) {
    if (!std::isfinite(length) || length <= 0.0) {
        throw std::invalid_argument("grid length must be finite and positive");
    }
    if (nodes < 3) {
        throw std::invalid_argument("grid needs at least 3 nodes, got " + std::to_string(nodes));
    }
    spacing_ = length / static_cast<double>(nodes - 1);
}

Grid make_grid(double length, std::size_t nodes) { return Grid(length, nodes); }

DiscreteFn::DiscreteFn(const Grid& grid) : grid_(grid), values_(grid.nodes(), 0.0) {}

DiscreteFn::DiscreteFn(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.nodes()) {
        throw std::invalid_argument("value count does not match grid node count");
    }
}

DiscreteFn DiscreteFn::from(const Grid& grid, const std::function<double(double)>& f) {
    DiscreteFn u(grid);
    for (std::size_t i = 0; i < grid.nodes(); ++i) u[i] = f(grid.x(i));
    return u;
}

bool DiscreteFn::finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool DiscreteFn::pinned() const { return values_.front() == 0.0 && finite(); }

DiscreteFn& DiscreteFn::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

double lp_power(const DiscreteFn& u, double p) {
    const Grid& g = u.grid();
    double sum = 0.0;
    for (std::size_t i = 0; i < g.nodes(); ++i) sum += g.weight(i) * std::pow(std::abs(u[i]), p);
    return sum;
}

double lp_norm(const DiscreteFn& u, double p) {
    if (!std::isfinite(p) || p < 1.0) throw std::invalid_argument("lp_norm needs finite p >= 1");
    return std::pow(lp_power(u, p), 1.0 / p);
}

double grad_norm(const DiscreteFn& u) {
    const double h = u.grid().spacing();
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        const double d = u[i + 1] - u[i];
        sum += d * d;
    }
    return std::sqrt(sum / h);
}

double sup_norm(const DiscreteFn& u) {
    double m = 0.0;
    for (double v : u.values()) m = std::max(m, std::abs(v));
    return m;
}

double inner(const DiscreteFn& u, const DiscreteFn& v) {
    require_same_grid(u, v);
    const Grid& g = u.grid();
    double sum = 0.0;
    for (std::size_t i = 0; i < g.nodes(); ++i) sum += g.weight(i) * u[i] * v[i];
    return sum;
}

Norms norms(const DiscreteFn& u, double p) {
    return {lp_norm(u, p), grad_norm(u), std::abs(u.boundary_value())};
}

void require_same_grid(const DiscreteFn& u, const DiscreteFn& v) {
    if (!(u.grid() == v.grid())) throw std::invalid_argument("functions live on different grids");
}

}  // namespace blowup
